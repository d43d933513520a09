#include "splap/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "splap/errors.hpp"

namespace splap {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json make_report(const std::string& kind) {
  nlohmann::json doc;
  doc["kind"] = kind;
  doc["schema_version"] = kSchemaVersion;
  return doc;
}

std::string dump_report(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings as-is
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing output file '" + path + "'");
}

void write_json(const nlohmann::json& doc, const std::string& path) {
  write_text(dump_report(doc), path);
}

nlohmann::json to_json(const SchemeRecord& r) {
  nlohmann::json j;
  j["level"] = r.level;
  j["iters"] = r.iters;
  j["sobolev_norm"] = r.sobolev_norm;
  j["sup_norm"] = r.sup_norm;
  j["energy"] = r.energy;
  j["grad_norm"] = r.grad_norm;
  j["monotonicity_defect"] = r.monotonicity_defect;
  j["interior_lower_bound"] = r.interior_lower_bound;
  j["weak_residual"] = r.weak_residual;
  j["strong_residual"] = r.strong_residual;
  j["distance_to_final"] = r.distance_to_final;
  return j;
}

nlohmann::json to_json(const SchemeReport& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["stopped_at"] = r.stopped_at;
  j["levels"] = nlohmann::json::array();
  for (const SchemeRecord& rec : r.records) j["levels"].push_back(to_json(rec));
  return j;
}

nlohmann::json to_json(const StudyRow& r) {
  nlohmann::json j;
  j["res"] = r.res;
  j["h"] = r.h;
  j["sup_error"] = r.sup_error;
  if (std::isnan(r.order))
    j["order"] = nullptr;  // first row has no predecessor to compare against
  else
    j["order"] = r.order;
  j["stopped_at"] = r.stopped_at;
  return j;
}

nlohmann::json to_json(const StudyTable& t) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const StudyRow& r : t.rows) j["rows"].push_back(to_json(r));
  if (std::isnan(t.fitted_order))
    j["fitted_order"] = nullptr;
  else
    j["fitted_order"] = t.fitted_order;
  return j;
}

nlohmann::json to_json(const SweepRow& r) {
  nlohmann::json j;
  j["multiplier"] = r.multiplier;
  j["s"] = r.s;
  j["expected_to_hold"] = r.expected_to_hold;
  j["holds"] = r.holds;
  j["nchecked"] = r.nchecked;
  j["witness"] = r.witness;
  j["worst_ratio"] = r.worst_ratio;
  return j;
}

nlohmann::json to_json(const BestConstantReport& r) {
  nlohmann::json j;
  j["energy"] = r.energy;
  j["pairing_gap"] = r.pairing_gap;
  j["theta"] = r.theta;
  j["mu_formula"] = r.mu_formula;
  j["mu_direct"] = r.direct.value;
  j["gap"] = r.gap;
  j["equality_defect"] = r.equality_defect;
  j["direct"]["start_index"] = r.direct.start_index;
  j["direct"]["start_values"] = r.direct.start_values;
  j["sweep"] = nlohmann::json::array();
  for (const SweepRow& row : r.sweep) j["sweep"].push_back(to_json(row));
  return j;
}

namespace {

std::string csv_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string solution_csv(const Grid& grid, const GridFunction& u) {
  check_grid_function(grid, u, "solution");
  std::ostringstream out;
  for (int d = 0; d < grid.dim; ++d) out << "x" << d << ",";
  out << "value\n";
  for (int k = 0; k < grid.ninterior(); ++k) {
    const Point x = grid.interior_node(k);
    for (double xi : x) out << format_number(xi) << ",";
    out << format_number(u[static_cast<size_t>(k)]) << "\n";
  }
  return out.str();
}

std::string iteration_csv(const std::vector<IterationRecord>& log) {
  std::ostringstream out;
  out << "iter,energy,grad_norm,step\n";
  for (const IterationRecord& r : log)
    out << r.iter << "," << format_number(r.energy) << ","
        << format_number(r.grad_norm) << "," << format_number(r.step) << "\n";
  return out.str();
}

std::string scheme_csv(const std::vector<SchemeRecord>& records) {
  std::ostringstream out;
  out << "level,iters,sobolev_norm,sup_norm,energy,grad_norm,"
         "monotonicity_defect,interior_lower_bound,weak_residual,"
         "strong_residual,distance_to_final\n";
  for (const SchemeRecord& r : records)
    out << r.level << "," << r.iters << "," << format_number(r.sobolev_norm)
        << "," << format_number(r.sup_norm) << "," << format_number(r.energy)
        << "," << format_number(r.grad_norm) << ","
        << format_number(r.monotonicity_defect) << ","
        << format_number(r.interior_lower_bound) << ","
        << format_number(r.weak_residual) << ","
        << format_number(r.strong_residual) << ","
        << format_number(r.distance_to_final) << "\n";
  return out.str();
}

std::string study_csv(const StudyTable& table) {
  std::ostringstream out;
  out << "res,h,sup_error,order,stopped_at\n";
  for (const StudyRow& r : table.rows) {
    out << r.res << "," << format_number(r.h) << ","
        << format_number(r.sup_error) << ",";
    if (std::isnan(r.order))
      out << "";  // blank first-row order, not "nan": plotting scripts skip it
    else
      out << format_number(r.order);
    out << "," << r.stopped_at << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "multiplier,s,expected_to_hold,holds,nchecked,witness,worst_ratio\n";
  for (const SweepRow& r : rows)
    out << format_number(r.multiplier) << "," << format_number(r.s) << ","
        << csv_bool(r.expected_to_hold) << "," << csv_bool(r.holds) << ","
        << r.nchecked << "," << r.witness << "," << format_number(r.worst_ratio)
        << "\n";
  return out.str();
}

}  // namespace splap
