#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "splap/best_constant.hpp"
#include "splap/energy.hpp"
#include "splap/grid.hpp"
#include "splap/mms.hpp"
#include "splap/scheme.hpp"

namespace splap {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that round-trips the double exactly (via
// std::to_chars): '.' separator regardless of locale, deterministic across
// reruns. NaN/inf spelled "nan"/"inf"/"-inf".
std::string format_number(double x);

// Report skeleton: {"kind": kind, "schema_version": 1}. nlohmann objects are
// key-sorted maps, so dumps are canonical; no timestamps anywhere — reruns
// with the same config must be byte-identical.
nlohmann::json make_report(const std::string& kind);

// 2-space indent, sorted keys, trailing LF.
std::string dump_report(const nlohmann::json& doc);
void write_json(const nlohmann::json& doc, const std::string& path);
void write_text(const std::string& text, const std::string& path);

nlohmann::json to_json(const SchemeRecord& r);
nlohmann::json to_json(const SchemeReport& r);  // records + flags, not the
                                                // grid function (that is CSV)
nlohmann::json to_json(const StudyRow& r);
nlohmann::json to_json(const StudyTable& t);
nlohmann::json to_json(const SweepRow& r);
nlohmann::json to_json(const BestConstantReport& r);

// CSV builders — header row, '.' decimal separator, LF line endings. The
// solution table is one row per interior node in grid order with the value
// in the last column, which is exactly the layout the csv source spec reads
// back: outputs round-trip as inputs.
std::string solution_csv(const Grid& grid, const GridFunction& u);
std::string iteration_csv(const std::vector<IterationRecord>& log);
std::string scheme_csv(const std::vector<SchemeRecord>& records);
std::string study_csv(const StudyTable& table);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace splap
