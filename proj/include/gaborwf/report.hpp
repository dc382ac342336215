#pragma once
#include "gaborwf/datum.hpp"
#include "gaborwf/wf_detector.hpp"
#include <json.hpp>
#include <cstdint>
#include <optional>

namespace gwf {

using ojson = nlohmann::ordered_json;

struct ScenarioConfig {
    std::string name;
    int d = 1;
    Mat Q;
    std::vector<double> times;
    std::string datum;         // builtin name or expression; empty = algebraic only
    std::string samples_path;  // nonempty when the datum is a sample file
    double X = 40.0;
    int n = 4096;
    int N_h = 128;
    double hermite_scale = 1.0;
    DetectorConfig detector;
    std::optional<ConicSet> wf0;  // initial wave-front hypothesis; nullopt = everything
    ojson expected;               // golden block, copied into the report verbatim
};

// Throws invariant_violation on contract violations (bad Q, non-ascending
// times, unknown datum), nlohmann::json::exception on malformed JSON.
ScenarioConfig parse_scenario(const ojson& j);
ScenarioConfig load_scenario(const std::string& path);
ojson scenario_to_json(const ScenarioConfig& sc);

struct RunOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency
    bool verbose = false;
};

struct ScenarioArtifacts {
    ojson report;
    std::vector<Spectrogram> spectrograms;  // one per time when a datum is evolved
    std::vector<WFEstimate> estimates;
    Subspace S;
};

ScenarioArtifacts run_scenario(const ScenarioConfig& sc, const RunOptions& opt);

// report.json + CSV tables (per-direction shell decay, flagged caps,
// downsampled spectrogram, singular-space basis) under out_dir/<name>/.
// Returns the report path.
std::string write_artifacts(const ScenarioConfig& sc, const ScenarioArtifacts& art,
                            const std::string& out_dir);

// Serialization helpers shared with the CLI and tests.
ojson conic_to_json(const ConicSet& c);
ojson subspace_to_json(const Subspace& s);
ojson complex_matrix_to_json(const Mat& m);
Mat complex_matrix_from_json(const ojson& j);

} // namespace gwf
