#include "mips/harness/run.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mips/analysis.hpp"
#include "mips/collisions.hpp"
#include "mips/errors.hpp"
#include "mips/integrator.hpp"
#include "mips/kernels.hpp"
#include "mips/rng.hpp"

namespace mips::harness {

namespace {

constexpr int kPlacementAttempts = 10000;
constexpr int kRelaxationSteps = 100;
// Residual overlap (as a fraction of the radius) tolerated after relaxation.
constexpr double kResidualOverlapFraction = 0.25;

double min_pair_distance(const SwarmState& state, const SwarmParams& params) {
    const SpatialHashGrid grid = build_grid(state, params, 2.0 * params.radius);
    double min_d2 = std::numeric_limits<double>::infinity();
    std::vector<int> neighbors;
    for (std::size_t i = 0; i < state.size(); ++i) {
        grid.gather_neighbors(state.x[i], state.y[i], static_cast<int>(i), neighbors);
        for (const int j : neighbors) {
            double dx, dy, d2;
            kernels::scalar::min_image(state.x[i], state.y[i], &state.x[j], &state.y[j], 1,
                                       params.domain_width, params.domain_height, grid.periodic,
                                       &dx, &dy, &d2);
            min_d2 = std::min(min_d2, d2);
        }
    }
    return std::sqrt(min_d2);
}

}  // namespace

SwarmState place_robots(const SwarmParams& params) {
    const std::size_t n = static_cast<std::size_t>(params.n_robots);
    SwarmState state = SwarmState::zeros(n);
    state.time = 0.0;

    // Incremental occupancy grid for the rejection test.
    SpatialHashGrid grid;
    const double reach = 2.0 * params.radius;
    grid.cell_size = reach;
    grid.periodic = params.boundary_mode == BoundaryMode::periodic;
    grid.nx = std::max(1, static_cast<int>(std::floor(params.domain_width / reach)));
    grid.ny = std::max(1, static_cast<int>(std::floor(params.domain_height / reach)));
    grid.cell_w = params.domain_width / grid.nx;
    grid.cell_h = params.domain_height / grid.ny;
    grid.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, {});

    const double diam2 = 4.0 * params.radius * params.radius;
    const double margin = params.boundary_mode == BoundaryMode::reflecting ? params.radius : 0.0;
    const double span_x = params.domain_width - 2.0 * margin;
    const double span_y = params.domain_height - 2.0 * margin;

    bool needs_relaxation = false;
    std::vector<int> neighbors;
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            const double x =
                margin + uniform_stream(params.seed, i, attempt, NoiseChannel::place_x) * span_x;
            const double y =
                margin + uniform_stream(params.seed, i, attempt, NoiseChannel::place_y) * span_y;
            grid.gather_neighbors(x, y, -1, neighbors);
            bool overlaps = false;
            for (const int j : neighbors) {
                double dx, dy, d2;
                kernels::scalar::min_image(x, y, &state.x[j], &state.y[j], 1, params.domain_width,
                                           params.domain_height, grid.periodic, &dx, &dy, &d2);
                if (d2 < diam2) {
                    overlaps = true;
                    break;
                }
            }
            if (!overlaps || attempt == kPlacementAttempts - 1) {
                state.x[i] = x;
                state.y[i] = y;
                placed = !overlaps;
                if (!placed) needs_relaxation = true;
                const int flat = grid.cell_y(y) * grid.nx + grid.cell_x(x);
                grid.cells[flat].push_back(static_cast<int>(i));
                break;
            }
        }
        state.theta[i] =
            uniform_stream(params.seed, i, 0, NoiseChannel::place_theta) * 2.0 * std::numbers::pi;
    }

    if (needs_relaxation && params.force_stiffness > 0.0) {
        // Relaxation pseudo-timestep: k * dt_relax = 0.5 is the fastest
        // overshoot-free rate, independent of the run's integration dt.
        SwarmParams relax = params;
        relax.dt = 0.5 / params.force_stiffness;
        for (int it = 0; it < kRelaxationSteps; ++it) {
            const SpatialHashGrid force_grid = build_grid(state, relax);
            const std::vector<Vec2> disp = compute_overlap_forces(state, force_grid, relax);
            for (std::size_t i = 0; i < n; ++i) {
                state.x[i] += disp[i].x;
                state.y[i] += disp[i].y;
            }
            if (params.boundary_mode == BoundaryMode::periodic) {
                kernels::active().wrap_into_box(state.x.data(), state.y.data(), n,
                                                params.domain_width, params.domain_height);
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const RobotPose r = reflect_boundary(state.pose(i), params);
                    state.set_pose(i, r);
                }
            }
        }
    }
    if (n > 1) {
        const double min_distance = min_pair_distance(state, params);
        const double allowed = 2.0 * params.radius - kResidualOverlapFraction * params.radius;
        if (needs_relaxation && min_distance < allowed) {
            throw InitializationError(
                "cannot place robots: residual overlap after relaxation (min pair distance " +
                std::to_string(min_distance) + " < " + std::to_string(allowed) + ")");
        }
    }
    state.ux = state.x;
    state.uy = state.y;
    return state;
}

RunRecord run_simulation(const SwarmParams& params, const RunOptions& options) {
    RunRecord record;
    record.params = params;
    {
        nlohmann::json resolved = params_to_json(params);
        resolved["snapshot_every"] = options.snapshot_every;
        resolved["metrics_every"] = options.metrics_every;
        record.spec_hash = spec_hash(resolved);
    }

    const double contact_tol =
        options.contact_tolerance >= 0.0 ? options.contact_tolerance : 0.05 * params.radius;

    SwarmState state = place_robots(params);
    const SwarmState initial = state;
    record.snapshots.push_back(state);

    for (std::int64_t s = 0; s < params.n_steps; ++s) {
        std::vector<Vec2> disp;
        if (params.force_stiffness > 0.0) {
            const SpatialHashGrid grid = build_grid(state, params);
            disp = compute_overlap_forces(state, grid, params);
        }
        SwarmState next = step({state, disp, params, s});

        const std::int64_t done = s + 1;
        if (done % options.metrics_every == 0 || done == params.n_steps) {
            record.metrics.times.push_back(next.time);
            record.metrics.mean_speed.push_back(analysis::mean_projected_speed(state, next, params));
            const ContactGraph graph = build_contact_graph(next, params, contact_tol);
            record.metrics.aggregation_fraction.push_back(
                analysis::aggregation_fraction(graph, options.cluster_cutoff));
            double msd = 0.0;
            for (std::size_t i = 0; i < next.size(); ++i) {
                const double dx = next.ux[i] - initial.ux[i];
                const double dy = next.uy[i] - initial.uy[i];
                msd += dx * dx + dy * dy;
            }
            record.metrics.msd.push_back(msd / static_cast<double>(next.size()));
        }
        const bool snapshot_due = options.snapshot_every > 0 && done % options.snapshot_every == 0;
        if (snapshot_due || done == params.n_steps) {
            record.snapshots.push_back(next);
        }
        state = std::move(next);
    }
    return record;
}

TheoryReport make_theory_report(const theory::TheoryInputs& in, std::optional<double> mean_density) {
    TheoryReport report;
    report.inputs = in;
    report.effective_diffusion = theory::effective_diffusion(in);
    report.activity = theory::activity(in);
    const theory::SpinodalResult spin = theory::spinodal_densities(in);
    report.packing_density = spin.packing_density;
    report.spinodal_exists = spin.exists;
    report.spinodal_low = spin.spinodal_low;
    report.spinodal_high = spin.spinodal_high;
    report.range_low = spin.range_low;
    report.range_high = spin.range_high;
    report.mean_density = mean_density;
    if (mean_density && spin.exists) {
        report.mean_density_in_range =
            *mean_density >= *spin.range_low && *mean_density <= *spin.range_high;
    } else if (mean_density) {
        report.mean_density_in_range = false;
    }
    return report;
}

std::string theory_report_json(const TheoryReport& r) {
    nlohmann::json j{
        {"inputs",
         {{"speed", r.inputs.speed},
          {"diff_trans", r.inputs.diff_trans},
          {"diff_rot", r.inputs.diff_rot},
          {"radius", r.inputs.radius},
          {"resolve_time", r.inputs.resolve_time}}},
        {"effective_diffusion", r.effective_diffusion},
        {"activity", r.activity},
        {"packing_density", r.packing_density},
        {"spinodal_exists", r.spinodal_exists},
        {"verdict", r.spinodal_exists ? "phase separation possible" : "phase separation not expected"},
    };
    j["spinodal_low"] = r.spinodal_low ? nlohmann::json(*r.spinodal_low) : nlohmann::json(nullptr);
    j["spinodal_high"] = r.spinodal_high ? nlohmann::json(*r.spinodal_high) : nlohmann::json(nullptr);
    j["range_low"] = r.range_low ? nlohmann::json(*r.range_low) : nlohmann::json(nullptr);
    j["range_high"] = r.range_high ? nlohmann::json(*r.range_high) : nlohmann::json(nullptr);
    if (r.mean_density) {
        j["mean_density"] = *r.mean_density;
        j["mean_density_in_range"] = *r.mean_density_in_range;
    }
    return j.dump(2) + "\n";
}

}  // namespace mips::harness
