#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mips/params.hpp"

namespace mips::harness {

// Analysis knobs shared by the simulate/sweep/analyze paths. Negative or
// zero sentinels mean "derive from the run parameters at use time".
struct AnalysisConfig {
    int grid_size = 10;
    double cutoff = 0.0;              // <= 0: 2 * max lattice spacing
    int cluster_cutoff = 4;           // Nc
    double contact_tolerance = -1.0;  // < 0: 0.05 * radius
    double bandwidth = 0.0;           // <= 0: Silverman rule on the pooled sample
    int eval_points = 256;
    double prominence_fraction = 0.1;
    double window_start = -1.0;  // < 0: half the run horizon
    int metrics_every = 1;

    double resolved_cutoff(const SwarmParams& p) const;
    double resolved_contact_tolerance(const SwarmParams& p) const;
    double resolved_window_start(const SwarmParams& p) const;
};

// A flat parameter document. domain size may be given either directly or
// via target_mean_density (square domain with area n_robots / density).
struct RunConfig {
    SwarmParams params;
    std::optional<double> target_mean_density;
};

struct SweepAxis {
    std::string field;
    std::vector<double> values;
};

struct ExperimentSpec {
    std::string name;
    RunConfig base;
    std::vector<SweepAxis> axes;
    int replicates = 1;
    std::int64_t snapshot_every = 0;
    AnalysisConfig analysis;
};

// Strict parsers: unknown keys are an error (they are usually sweep-config
// typos). All "parse" functions take parsed JSON; "load" functions read a
// file and map parse failures to ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
AnalysisConfig parse_analysis_config(const nlohmann::json& j);
ExperimentSpec parse_experiment_spec(const nlohmann::json& j);

SwarmParams resolve_run_config(const RunConfig& cfg);  // derives domain, validates

SwarmParams load_run_config(const std::filesystem::path& path);
AnalysisConfig load_analysis_config(const std::filesystem::path& path);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

// Applies one sweep-axis value to a parameter or analysis field by name.
// Throws ConfigError for unknown fields.
void apply_sweep_value(RunConfig& run, AnalysisConfig& analysis, const std::string& field, double value);

nlohmann::json params_to_json(const SwarmParams& p);
nlohmann::json analysis_to_json(const AnalysisConfig& a);

// FNV-1a 64 over the canonical (sorted-key) JSON dump.
std::uint64_t spec_hash(const nlohmann::json& resolved);
std::string hash_hex(std::uint64_t h);

}  // namespace mips::harness
