#pragma once

#include <cstdint>
#include <span>

#include "mips/params.hpp"
#include "mips/types.hpp"

namespace mips {

// Carrier for one Euler-Maruyama step: the current state, the externally
// computed per-robot collision displacements (empty means all-zero), and
// the step index that keys the noise streams.
struct StepInput {
    const SwarmState& state;
    std::span<const Vec2> collision_displacement;
    const SwarmParams& params;
    std::int64_t step_index = 0;
};

// Advances every robot one time step:
//   x' = x + v0 cos(theta) dt + sqrt(2 Dt dt) xi_x + collision_dx
//   y' = y + v0 sin(theta) dt + sqrt(2 Dt dt) xi_y + collision_dy
//   theta' = theta + sqrt(2 Dr dt) xi_theta
// followed by boundary handling per params.boundary_mode. Unwrapped
// coordinates accumulate the raw displacement in periodic mode and track
// the reflected position otherwise. Pure function of its input.
SwarmState step(const StepInput& input);

// Maps x, y into [0, W) x [0, H) by modular reduction; theta unchanged.
RobotPose wrap_periodic(const RobotPose& pose, const SwarmParams& params);

// Clamps the position to [r, W-r] x [r, H-r]; on a clamp event theta is
// reflected about the violated wall's normal (theta -> pi - theta for
// vertical walls, theta -> -theta for horizontal ones).
RobotPose reflect_boundary(const RobotPose& pose, const SwarmParams& params);

}  // namespace mips
