#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fjr/sim.hpp"

namespace fjr {

// Column names: "t" followed by every SimTrace signal, one column per joint.
// Single-joint traces use the bare signal name, otherwise name_1..name_n.
std::vector<std::string> trace_columns(const SimTrace& trace);

// CSV with a header row; every value printed at 17 significant digits so
// reading it back reproduces the doubles exactly.
void write_trace_csv(const SimTrace& trace, std::ostream& out);
// Throws std::runtime_error on a malformed header, a ragged row or a
// non-numeric field.
SimTrace read_trace_csv(std::istream& in);

nlohmann::json to_json(const ScenarioConfig& cfg);
nlohmann::json to_json(const Diagnostics& d);

// Sidecar document: resolved config (structured and as INI text),
// diagnostics, column list and sample count.
nlohmann::json trace_metadata(const SimTrace& trace, const ScenarioConfig& cfg,
                              const Diagnostics& diagnostics);

// Writes <dir>/<stem>.csv and <dir>/<stem>.json; creates dir if needed.
void write_trace_files(const std::filesystem::path& dir, const std::string& stem,
                       const SimTrace& trace, const nlohmann::json& metadata);

}  // namespace fjr
