#pragma once
#include "gaborwf/report.hpp"

namespace gwf {

// Built-in scenarios: the worked Hamiltonian families plus the distributions
// whose wave-front sets are known in closed form (used as detector goldens).
std::vector<std::string> catalog_names();
ScenarioConfig catalog_scenario(const std::string& name);

// Writes every scenario (including the "harmonic" and "heat_airy" aliases)
// as <dir>/<name>.json.
void write_catalog(const std::string& dir);

// Compares a run report against the scenario's expected block.
// Returns human-readable mismatch descriptions; empty = everything checked out.
std::vector<std::string> expected_mismatches(const ScenarioConfig& sc, const ojson& report);

} // namespace gwf
