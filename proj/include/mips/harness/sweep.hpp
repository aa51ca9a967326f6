#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mips/analysis.hpp"
#include "mips/harness/config.hpp"
#include "mips/harness/run.hpp"

namespace mips::harness {

// Scalar observables distilled from one run, averaged over the analysis
// window (from window_start to the end of the run).
struct RunObservables {
    double mean_speed = 0.0;
    double agg_fraction = 0.0;
    std::vector<double> density_samples;  // pooled lattice values from windowed snapshots
    bool failed = false;
    std::string error;
};

struct SweepRun {
    std::size_t cell_index = 0;
    std::vector<std::pair<std::string, double>> axis_values;  // in axis order
    int replicate = 0;
    std::uint64_t seed = 0;
    std::uint64_t hash = 0;
    RunObservables obs;
};

struct CellAggregate {
    std::size_t cell_index = 0;
    std::vector<std::pair<std::string, double>> axis_values;
    int n_ok = 0;
    double mean_speed = 0.0;
    double se_speed = 0.0;
    double mean_agg = 0.0;
    double se_agg = 0.0;
    int kde_modes = -1;  // -1 when the cell pooled no density samples
};

struct SweepOutcome {
    std::vector<SweepRun> runs;           // ordered by (cell, replicate)
    std::vector<CellAggregate> cells;     // ordered by cell
    std::string runs_csv;                 // tidy per-run table
    std::string aggregate_csv;            // per-cell means and standard errors
    // Speed-density fit over the cell means, produced when the sweep has a
    // single target_mean_density axis with a usable slowdown signal.
    std::optional<analysis::SpeedDensityFit> speed_fit;
};

struct SweepOptions {
    int workers = 1;
    bool resume = false;
    std::filesystem::path out_dir;  // empty: keep everything in memory
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
};

// Cartesian product of the sweep axes x replicates. Replicate k of a cell
// runs with seed base_seed + k. Cells run independently (and possibly
// concurrently); failures are recorded per run without aborting the sweep.
// Results are bit-identical for any worker count.
SweepOutcome run_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

}  // namespace mips::harness
