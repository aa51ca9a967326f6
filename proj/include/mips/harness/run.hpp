#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mips/harness/config.hpp"
#include "mips/params.hpp"
#include "mips/theory.hpp"
#include "mips/types.hpp"

namespace mips::harness {

struct RunOptions {
    std::int64_t snapshot_every = 0;  // > 0: every k steps plus the final one; 0: initial/final only
    int metrics_every = 1;
    double contact_tolerance = -1.0;  // < 0: 0.05 * radius
    int cluster_cutoff = 4;
};

struct RunRecord {
    std::uint64_t spec_hash = 0;
    SwarmParams params;
    std::vector<SwarmState> snapshots;
    MetricsSeries metrics;
};

// Uniform random initial placement: positions rejection-sampled to be
// overlap-free (up to 10^4 attempts per robot); if infeasible the swarm is
// relaxed by 100 force-only steps. Throws InitializationError when deep
// overlaps survive relaxation. Orientations are uniform on [0, 2pi).
SwarmState place_robots(const SwarmParams& params);

// Runs the full loop: build grid -> overlap forces -> step, recording
// per-step metrics (mean projected speed, aggregation fraction, MSD) every
// metrics_every steps and snapshots per RunOptions.
RunRecord run_simulation(const SwarmParams& params, const RunOptions& options = {});

struct TheoryReport {
    theory::TheoryInputs inputs;
    double effective_diffusion = 0.0;
    double activity = 0.0;
    double packing_density = 0.0;
    bool spinodal_exists = false;
    std::optional<double> spinodal_low;
    std::optional<double> spinodal_high;
    std::optional<double> range_low;
    std::optional<double> range_high;
    std::optional<double> mean_density;
    std::optional<bool> mean_density_in_range;
};

TheoryReport make_theory_report(const theory::TheoryInputs& in, std::optional<double> mean_density);
std::string theory_report_json(const TheoryReport& report);

}  // namespace mips::harness
