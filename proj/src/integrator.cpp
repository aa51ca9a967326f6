#include "mips/integrator.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "mips/kernels.hpp"
#include "mips/rng.hpp"

namespace mips {

SwarmState step(const StepInput& input) {
    const SwarmParams& p = input.params;
    const SwarmState& cur = input.state;
    const std::size_t n = cur.size();
    assert(input.collision_displacement.empty() || input.collision_displacement.size() == n);

    SwarmState next = cur;
    const double drift_scale = p.speed * p.dt;
    const double trans_scale = std::sqrt(2.0 * p.diff_trans * p.dt);
    const double rot_scale = std::sqrt(2.0 * p.diff_rot * p.dt);
    const std::uint64_t step_idx = static_cast<std::uint64_t>(input.step_index);

    for (std::size_t i = 0; i < n; ++i) {
        const double nx = noise_stream(p.seed, i, step_idx, NoiseChannel::x);
        const double ny = noise_stream(p.seed, i, step_idx, NoiseChannel::y);
        const double nt = noise_stream(p.seed, i, step_idx, NoiseChannel::theta);

        double ddx = drift_scale * std::cos(cur.theta[i]) + trans_scale * nx;
        double ddy = drift_scale * std::sin(cur.theta[i]) + trans_scale * ny;
        if (!input.collision_displacement.empty()) {
            ddx += input.collision_displacement[i].x;
            ddy += input.collision_displacement[i].y;
        }
        next.x[i] = cur.x[i] + ddx;
        next.y[i] = cur.y[i] + ddy;
        next.theta[i] = cur.theta[i] + rot_scale * nt;
        next.ux[i] = cur.ux[i] + ddx;
        next.uy[i] = cur.uy[i] + ddy;
    }

    if (p.boundary_mode == BoundaryMode::periodic) {
        kernels::active().wrap_into_box(next.x.data(), next.y.data(), n, p.domain_width, p.domain_height);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const RobotPose r = reflect_boundary(next.pose(i), p);
            next.set_pose(i, r);
            next.ux[i] = r.x;
            next.uy[i] = r.y;
        }
    }
    next.time = static_cast<double>(input.step_index + 1) * p.dt;
    return next;
}

RobotPose wrap_periodic(const RobotPose& pose, const SwarmParams& params) {
    RobotPose out = pose;
    kernels::scalar::wrap_into_box(&out.x, &out.y, 1, params.domain_width, params.domain_height);
    return out;
}

RobotPose reflect_boundary(const RobotPose& pose, const SwarmParams& params) {
    RobotPose out = pose;
    const double r = params.radius;
    const double xmax = params.domain_width - r;
    const double ymax = params.domain_height - r;

    if (out.x < r) {
        out.x = r;
        out.theta = std::numbers::pi - out.theta;
    } else if (out.x > xmax) {
        out.x = xmax;
        out.theta = std::numbers::pi - out.theta;
    }
    if (out.y < r) {
        out.y = r;
        out.theta = -out.theta;
    } else if (out.y > ymax) {
        out.y = ymax;
        out.theta = -out.theta;
    }
    return out;
}

}  // namespace mips
