#pragma once

#include <rqp/sim.hpp>

#include <stdexcept>
#include <string>

namespace rqp {

// Scenario file / log parse failure (malformed document, unknown key,
// wrong type). The message names the offending key.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kScenarioSchemaVersion = 1;

// JSON round-trip for Scenario. Unknown keys are rejected; the document
// carries schema_version.
std::string serialize_scenario(const Scenario& s);
Scenario parse_scenario(const std::string& text);

Scenario load_scenario_file(const std::string& path);

// CSV log, one row per control step, fixed column order, floats with 17
// significant digits (byte-identical across reruns of the same scenario).
std::string log_to_csv(const SimLog& log);

// Metrics as a JSON text summary.
std::string metrics_to_json(const Metrics& m);

void write_file(const std::string& path, const std::string& content);

}  // namespace rqp
