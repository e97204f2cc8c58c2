#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mflow/field.hpp"
#include "mflow/generators.hpp"
#include "mflow/mild.hpp"

namespace mflow {

// Scenario names accepted by the CLI and by run_scenario.
const std::vector<std::string>& scenario_names();

struct ScenarioConfig {
    std::string scenario;
    GridSpec grid;
    double p = 4.0;
    std::uint64_t seed = 0;
    SolverConfig solver;
    std::filesystem::path output_dir = "out";
    nlohmann::json extra = nlohmann::json::object();  // scenario-specific knobs
};

// Defaults appropriate to the scenario (stationary pipelines get the larger
// box on which the bundled harmonic-map example satisfies the decay bound).
ScenarioConfig default_config(const std::string& scenario);

// Applies a JSON config document (file contents or flag overrides) on top of
// the current values. Unknown top-level keys land in extra.
void apply_json_config(ScenarioConfig& cfg, const nlohmann::json& j);

// Field source: {"generator": name, "params": {...}, "values": [...]} or
// {"file": "path.fld"} (grid must match).
Field field_from_config(const GridSpec& g, const nlohmann::json& source, std::uint64_t seed);

struct RunReport {
    nlohmann::json doc;  // schema "rr-1"
    bool pass = false;
};

// Runs the scenario, writes its artifacts (CSV/SVG/FLD1) into output_dir,
// and returns the report document. report.json itself is written by the
// caller so the document can be inspected programmatically first.
RunReport run_scenario(const ScenarioConfig& cfg);

}  // namespace mflow
