#include "splap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "splap/errors.hpp"

namespace splap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      fail("config key " + (path.empty() ? item.key() : path + "." + item.key()) +
           " is not recognized");
  }
}

const json& require_block(const json& j, const std::string& key) {
  if (!j.contains(key)) fail("config block " + key + " is required");
  if (!j.at(key).is_object()) fail("config block " + key + " must be an object");
  return j.at(key);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail("config key " + path + " must be a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail("config key " + path + " must be an integer");
  return j.get<long>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail("config key " + path + " must be a boolean");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail("config key " + path + " must be a string");
  return j.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail("config key " + path + " must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, path + "[]"));
  return out;
}

std::vector<int> get_int_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail("config key " + path + " must be a nonempty array of integers");
  std::vector<int> out;
  for (const auto& v : j)
    out.push_back(static_cast<int>(get_integer(v, path + "[]")));
  return out;
}

void parse_group(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "group", {"kind", "n"});
  if (!j.contains("kind")) fail("config key group.kind is required");
  const std::string kind = get_string(j.at("kind"), "group.kind");
  if (!j.contains("n")) fail("config key group.n is required");
  const long n = get_integer(j.at("n"), "group.n");
  if (n < 1) fail("config key group.n must be a positive integer");
  if (kind == "euclidean") {
    cfg.group = make_euclidean(static_cast<int>(n));
  } else if (kind == "heisenberg") {
    cfg.group = make_heisenberg(static_cast<int>(n));
  } else {
    fail("config key group.kind must be 'euclidean' or 'heisenberg', got '" +
         kind + "'");
  }
}

void parse_domain(const json& j, RunConfig& cfg) {
  if (!j.contains("shape")) fail("config key domain.shape is required");
  const std::string shape = get_string(j.at("shape"), "domain.shape");
  if (!j.contains("res")) fail("config key domain.res is required");
  cfg.res = get_int_array(j.at("res"), "domain.res");
  if (shape == "box") {
    reject_unknown_keys(j, "domain", {"shape", "lo", "hi", "res"});
    if (!j.contains("lo") || !j.contains("hi"))
      fail("config keys domain.lo and domain.hi are required for shape 'box'");
    BoxShape box;
    box.lo = get_number_array(j.at("lo"), "domain.lo");
    box.hi = get_number_array(j.at("hi"), "domain.hi");
    if (box.lo.size() != box.hi.size())
      fail("config keys domain.lo and domain.hi must have the same length");
    cfg.bbox = box;
    cfg.domain = box;
  } else if (shape == "ball") {
    reject_unknown_keys(j, "domain", {"shape", "center", "radius", "res"});
    if (!j.contains("center") || !j.contains("radius"))
      fail("config keys domain.center and domain.radius are required for "
           "shape 'ball'");
    BallShape ball;
    ball.center = get_number_array(j.at("center"), "domain.center");
    ball.radius = get_number(j.at("radius"), "domain.radius");
    if (!(ball.radius > 0.0))
      fail("config key domain.radius must be positive");
    BoxShape box;
    box.lo = ball.center;
    box.hi = ball.center;
    for (size_t i = 0; i < ball.center.size(); ++i) {
      box.lo[i] -= ball.radius;
      box.hi[i] += ball.radius;
    }
    cfg.bbox = box;
    cfg.domain = ball;
  } else {
    fail("config key domain.shape must be 'box' or 'ball', got '" + shape + "'");
  }
  if (cfg.res.size() != cfg.bbox.lo.size())
    fail("config key domain.res length must match the domain dimension");
}

SourceSpec parse_source(const json& j, size_t dim) {
  if (!j.is_object()) fail("config key problem.source must be an object");
  if (!j.contains("kind")) fail("config key problem.source.kind is required");
  SourceSpec src;
  src.kind = get_string(j.at("kind"), "problem.source.kind");
  if (src.kind == "constant") {
    reject_unknown_keys(j, "problem.source", {"kind", "value"});
    if (!j.contains("value"))
      fail("config key problem.source.value is required");
    src.value = get_number(j.at("value"), "problem.source.value");
  } else if (src.kind == "expression") {
    reject_unknown_keys(j, "problem.source", {"kind", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array() ||
        j.at("terms").empty())
      fail("config key problem.source.terms must be a nonempty array");
    size_t t = 0;
    for (const auto& jt : j.at("terms")) {
      const std::string path = "problem.source.terms[" + std::to_string(t) + "]";
      if (!jt.is_object()) fail("config key " + path + " must be an object");
      reject_unknown_keys(jt, path, {"coef", "powers"});
      SourceSpec::Term term;
      if (!jt.contains("coef")) fail("config key " + path + ".coef is required");
      term.coef = get_number(jt.at("coef"), path + ".coef");
      if (!jt.contains("powers"))
        fail("config key " + path + ".powers is required");
      term.powers = get_int_array(jt.at("powers"), path + ".powers");
      if (term.powers.size() != dim)
        fail("config key " + path + ".powers length must match the domain "
             "dimension");
      for (int pw : term.powers)
        if (pw < 0) fail("config key " + path + ".powers must be nonnegative");
      src.terms.push_back(std::move(term));
      ++t;
    }
  } else if (src.kind == "csv") {
    reject_unknown_keys(j, "problem.source", {"kind", "path"});
    if (!j.contains("path")) fail("config key problem.source.path is required");
    src.path = get_string(j.at("path"), "problem.source.path");
  } else {
    fail("config key problem.source.kind must be 'constant', 'expression', or "
         "'csv', got '" + src.kind + "'");
  }
  return src;
}

void parse_problem(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "problem", {"p", "delta", "source"});
  if (!j.contains("p")) fail("config key problem.p is required");
  cfg.p = get_number(j.at("p"), "problem.p");
  if (!j.contains("delta")) fail("config key problem.delta is required");
  cfg.delta = get_number(j.at("delta"), "problem.delta");
  if (!j.contains("source")) fail("config key problem.source is required");
  cfg.source = parse_source(j.at("source"), cfg.res.size());
}

void parse_scheme(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "scheme",
                      {"n_schedule", "n_top", "grad_tol", "energy_tol",
                       "max_iters", "seed", "residual_tol"});
  const bool has_list = j.contains("n_schedule");
  const bool has_top = j.contains("n_top");
  if (has_list == has_top)
    fail("config block scheme requires exactly one of n_schedule or n_top");
  if (has_list) {
    if (!j.at("n_schedule").is_array() || j.at("n_schedule").empty())
      fail("config key scheme.n_schedule must be a nonempty array of integers");
    for (const auto& v : j.at("n_schedule"))
      cfg.schedule.push_back(get_integer(v, "scheme.n_schedule[]"));
  } else {
    const long top = get_integer(j.at("n_top"), "scheme.n_top");
    if (top < 1) fail("config key scheme.n_top must be a positive integer");
    for (long n = 1; n <= top; n *= 2) cfg.schedule.push_back(n);
  }
  if (j.contains("grad_tol"))
    cfg.solver.grad_tol = get_number(j.at("grad_tol"), "scheme.grad_tol");
  if (j.contains("energy_tol"))
    cfg.solver.energy_tol = get_number(j.at("energy_tol"), "scheme.energy_tol");
  if (j.contains("max_iters"))
    cfg.solver.max_iters = static_cast<int>(
        get_integer(j.at("max_iters"), "scheme.max_iters"));
  if (j.contains("seed"))
    cfg.solver.seed = static_cast<unsigned long>(
        get_integer(j.at("seed"), "scheme.seed"));
  if (j.contains("residual_tol"))
    cfg.residual_tol = get_number(j.at("residual_tol"), "scheme.residual_tol");
  if (!(cfg.residual_tol > 0.0))
    fail("config key scheme.residual_tol must be positive");
  validate(cfg.solver);
}

void parse_outputs(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "outputs", {"directory", "formats", "snapshots"});
  if (j.contains("directory"))
    cfg.outputs.directory = get_string(j.at("directory"), "outputs.directory");
  if (j.contains("formats")) {
    if (!j.at("formats").is_array() || j.at("formats").empty())
      fail("config key outputs.formats must be a nonempty array");
    cfg.outputs.formats.clear();
    for (const auto& v : j.at("formats")) {
      const std::string f = get_string(v, "outputs.formats[]");
      if (f != "json" && f != "csv")
        fail("config key outputs.formats entries must be 'json' or 'csv', "
             "got '" + f + "'");
      cfg.outputs.formats.push_back(f);
    }
  }
  if (j.contains("snapshots"))
    cfg.outputs.snapshots = get_bool(j.at("snapshots"), "outputs.snapshots");
}

void parse_best_constant(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "best_constant", {"gap_tol", "nstarts", "nrandom"});
  if (j.contains("gap_tol"))
    cfg.best_constant.gap_tol =
        get_number(j.at("gap_tol"), "best_constant.gap_tol");
  if (!(cfg.best_constant.gap_tol > 0.0))
    fail("config key best_constant.gap_tol must be positive");
  if (j.contains("nstarts"))
    cfg.best_constant.nstarts = static_cast<int>(
        get_integer(j.at("nstarts"), "best_constant.nstarts"));
  if (cfg.best_constant.nstarts < 0)
    fail("config key best_constant.nstarts must be nonnegative");
  if (j.contains("nrandom"))
    cfg.best_constant.nrandom = static_cast<int>(
        get_integer(j.at("nrandom"), "best_constant.nrandom"));
  if (cfg.best_constant.nrandom < 1)
    fail("config key best_constant.nrandom must be at least 1");
}

void parse_mms(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "mms",
                      {"profile", "amplitude", "resolutions", "schedule_top"});
  if (j.contains("profile"))
    cfg.mms.profile = get_string(j.at("profile"), "mms.profile");
  if (cfg.mms.profile != "sine" && cfg.mms.profile != "product_sine" &&
      cfg.mms.profile != "box_bump")
    fail("config key mms.profile must be 'sine', 'product_sine', or "
         "'box_bump', got '" + cfg.mms.profile + "'");
  if (j.contains("amplitude"))
    cfg.mms.amplitude = get_number(j.at("amplitude"), "mms.amplitude");
  if (!(cfg.mms.amplitude > 0.0))
    fail("config key mms.amplitude must be positive");
  if (j.contains("resolutions"))
    cfg.mms.resolutions = get_int_array(j.at("resolutions"), "mms.resolutions");
  if (j.contains("schedule_top")) {
    cfg.mms.schedule_top = get_integer(j.at("schedule_top"), "mms.schedule_top");
    if (cfg.mms.schedule_top < 1)
      fail("config key mms.schedule_top must be a positive integer");
  }
}

void parse_verify(const json& j, RunConfig& cfg) {
  reject_unknown_keys(j, "verify", {"suites", "adjoint_fault"});
  const auto& roster = all_suites();
  if (j.contains("suites")) {
    cfg.verify.use_default_suites = false;
    if (!j.at("suites").is_array())
      fail("config key verify.suites must be an array");
    for (const auto& v : j.at("suites")) {
      const std::string s = get_string(v, "verify.suites[]");
      if (std::find(roster.begin(), roster.end(), s) == roster.end())
        fail("config key verify.suites contains unknown suite '" + s + "'");
      cfg.verify.suites.push_back(s);
    }
  }
  if (j.contains("adjoint_fault"))
    cfg.verify.adjoint_fault =
        get_bool(j.at("adjoint_fault"), "verify.adjoint_fault");
}

}  // namespace

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> roster = {
      "duality", "gradient", "pairing", "chain", "dual_bound", "equality"};
  return roster;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config root must be an object");
  reject_unknown_keys(j, "", {"group", "domain", "problem", "scheme", "outputs",
                              "best_constant", "mms", "verify"});
  RunConfig cfg;
  parse_group(require_block(j, "group"), cfg);
  parse_domain(require_block(j, "domain"), cfg);
  parse_problem(require_block(j, "problem"), cfg);
  parse_scheme(require_block(j, "scheme"), cfg);
  if (j.contains("outputs")) parse_outputs(require_block(j, "outputs"), cfg);
  if (j.contains("best_constant"))
    parse_best_constant(require_block(j, "best_constant"), cfg);
  if (j.contains("mms")) parse_mms(require_block(j, "mms"), cfg);
  if (j.contains("verify")) parse_verify(require_block(j, "verify"), cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

GridFunction evaluate_source(const SourceSpec& src, const Grid& grid) {
  GridFunction f(static_cast<size_t>(grid.ninterior()));
  if (src.kind == "constant") {
    for (double& x : f) x = src.value;
  } else if (src.kind == "expression") {
    for (int k = 0; k < grid.ninterior(); ++k) {
      const Point x = grid.interior_node(k);
      double acc = 0.0;
      for (const SourceSpec::Term& t : src.terms) {
        if (t.powers.size() != x.size())
          fail("source term powers length does not match the grid dimension");
        double prod = t.coef;
        for (size_t i = 0; i < x.size(); ++i)
          for (int rep = 0; rep < t.powers[i]; ++rep) prod *= x[i];
        acc += prod;
      }
      f[static_cast<size_t>(k)] = acc;
    }
  } else if (src.kind == "csv") {
    std::ifstream in(src.path);
    if (!in) fail("cannot open source file '" + src.path + "'");
    std::string line;
    if (!std::getline(in, line))
      fail("source file '" + src.path + "' is empty");
    // Header row, then one row per interior node in grid order; the value is
    // the last comma-separated column.
    long row = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (row >= grid.ninterior())
        fail("source file '" + src.path + "' has more rows than interior "
             "nodes (" + std::to_string(grid.ninterior()) + ")");
      const size_t pos = line.find_last_of(',');
      const std::string field =
          pos == std::string::npos ? line : line.substr(pos + 1);
      try {
        f[static_cast<size_t>(row)] = std::stod(field);
      } catch (const std::exception&) {
        fail("source file '" + src.path + "' row " + std::to_string(row + 1) +
             ": cannot parse value '" + field + "'");
      }
      ++row;
    }
    if (row != grid.ninterior())
      fail("source file '" + src.path + "' has " + std::to_string(row) +
           " data rows; the grid has " + std::to_string(grid.ninterior()) +
           " interior nodes");
  } else {
    fail("unknown source kind '" + src.kind + "'");
  }
  return f;
}

std::unique_ptr<Problem> make_problem(const RunConfig& cfg) {
  Grid grid = build_grid(cfg.domain, cfg.bbox, cfg.res);
  GridFunction f = evaluate_source(cfg.source, grid);
  return std::make_unique<Problem>(cfg.group, cfg.domain, std::move(grid),
                                   cfg.p, cfg.delta, std::move(f));
}

ManufacturedCase make_manufactured_case(const RunConfig& cfg) {
  const auto require_origin = [&]() {
    for (double lo : cfg.bbox.lo)
      if (lo != 0.0)
        fail("mms profile '" + cfg.mms.profile +
             "' requires the domain box to start at the origin");
  };
  if (cfg.mms.profile == "sine") {
    if (cfg.bbox.lo.size() != 1)
      fail("mms profile 'sine' requires a one-dimensional domain");
    if (cfg.group.kind != "euclidean" || cfg.group.layer_dims[0] != 1)
      fail("mms profile 'sine' requires group {euclidean, n = 1}");
    require_origin();
    return sine_profile(cfg.bbox.hi[0], cfg.mms.amplitude, cfg.p);
  }
  if (cfg.mms.profile == "product_sine") {
    if (cfg.p != 2.0)
      fail("mms profile 'product_sine' is defined for p = 2 only");
    if (cfg.group.kind != "euclidean" ||
        cfg.group.layer_dims[0] != static_cast<int>(cfg.bbox.lo.size()))
      fail("mms profile 'product_sine' requires a euclidean group matching "
           "the domain dimension");
    require_origin();
    return product_sine_profile(cfg.bbox.hi, cfg.mms.amplitude);
  }
  // box_bump: the closed form is specific to [-1,1]^3 on the two-generator
  // step-two group.
  if (cfg.p != 2.0) fail("mms profile 'box_bump' is defined for p = 2 only");
  if (cfg.group.kind != "heisenberg" || cfg.group.layer_dims[0] != 2)
    fail("mms profile 'box_bump' requires group {heisenberg, n = 1}");
  if (cfg.bbox.lo != Point{-1.0, -1.0, -1.0} ||
      cfg.bbox.hi != Point{1.0, 1.0, 1.0})
    fail("mms profile 'box_bump' is defined on the box [-1,1]^3");
  if (cfg.mms.amplitude != 1.0)
    fail("mms profile 'box_bump' has a fixed amplitude of 1");
  return box_bump_profile();
}

}  // namespace splap
