#pragma once

#include <cstdint>
#include <vector>

#include "mips/errors.hpp"
#include "mips/types.hpp"

namespace mips {

// All physical and numerical constants of one run.
//
// Units are conventions, not enforced types: lengths in robot-radius-like
// units, times in seconds. speed = v0, diff_trans = Dt, diff_rot = Dr,
// force_stiffness = k (mobility folded in, so k*(overlap) is a speed).
struct SwarmParams {
    std::int64_t n_robots = 0;
    double radius = 0.0;
    double speed = 0.0;
    double diff_trans = 0.0;
    double diff_rot = 0.0;
    double domain_width = 0.0;
    double domain_height = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double force_stiffness = 0.0;
    BoundaryMode boundary_mode = BoundaryMode::periodic;
    std::int64_t n_steps = 0;

    double area() const { return domain_width * domain_height; }
    double mean_density() const { return static_cast<double>(n_robots) / area(); }
};

// Checks every construction invariant. Returns an empty list when p is
// valid; otherwise one entry per violated constraint.
//
// Codes: NonPositive (required-positive field <= 0, or required-nonnegative
// field < 0), DegenerateDomain (domain side <= 2*radius), OverPacked
// (total disk area N*pi*r^2 >= domain area).
std::vector<Violation> validate_params(const SwarmParams& p);

// Returns p unchanged when valid; throws ConfigError with the full
// violation list otherwise.
SwarmParams validated(const SwarmParams& p);

}  // namespace mips
