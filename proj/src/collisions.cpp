#include "mips/collisions.hpp"

#include <algorithm>
#include <cmath>

#include "mips/kernels.hpp"
#include "mips/rng.hpp"

namespace mips {

int SpatialHashGrid::cell_x(double x) const {
    const int c = static_cast<int>(std::floor(x / cell_w));
    return std::clamp(c, 0, nx - 1);
}

int SpatialHashGrid::cell_y(double y) const {
    const int c = static_cast<int>(std::floor(y / cell_h));
    return std::clamp(c, 0, ny - 1);
}

void SpatialHashGrid::gather_neighbors(double x, double y, int exclude_index,
                                       std::vector<int>& out) const {
    out.clear();
    const int cx = cell_x(x);
    const int cy = cell_y(y);
    int seen[9];
    int n_seen = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            int gx = cx + dx;
            int gy = cy + dy;
            if (periodic) {
                gx = (gx + nx) % nx;
                gy = (gy + ny) % ny;
            } else if (gx < 0 || gx >= nx || gy < 0 || gy >= ny) {
                continue;
            }
            const int flat = gy * nx + gx;
            bool duplicate = false;
            for (int k = 0; k < n_seen; ++k) {
                if (seen[k] == flat) {
                    duplicate = true;
                    break;
                }
            }
            if (duplicate) continue;
            seen[n_seen++] = flat;
            for (const int idx : cells[flat]) {
                if (idx != exclude_index) out.push_back(idx);
            }
        }
    }
}

double default_grid_reach(const SwarmParams& params) {
    const double step_bound = params.speed * params.dt +
                              params.force_stiffness * params.radius * params.dt +
                              8.0 * std::sqrt(2.0 * params.diff_trans * params.dt);
    return 2.0 * params.radius + step_bound;
}

SpatialHashGrid build_grid(const SwarmState& state, const SwarmParams& params, double reach) {
    if (reach <= 0.0) reach = default_grid_reach(params);
    SpatialHashGrid grid;
    grid.cell_size = reach;
    grid.periodic = params.boundary_mode == BoundaryMode::periodic;
    grid.nx = std::max(1, static_cast<int>(std::floor(params.domain_width / reach)));
    grid.ny = std::max(1, static_cast<int>(std::floor(params.domain_height / reach)));
    grid.cell_w = params.domain_width / grid.nx;
    grid.cell_h = params.domain_height / grid.ny;
    grid.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, {});
    for (std::size_t i = 0; i < state.size(); ++i) {
        const int flat = grid.cell_y(state.y[i]) * grid.nx + grid.cell_x(state.x[i]);
        grid.cells[flat].push_back(static_cast<int>(i));
    }
    return grid;
}

namespace {

// Reproducible separation axis for exactly coincident disks: both members
// of the pair derive the same unit vector from the pair's noise stream and
// take opposite signs.
Vec2 coincidence_direction(const SwarmParams& params, std::uint64_t step, int i, int j) {
    const std::uint64_t pair_id = static_cast<std::uint64_t>(std::min(i, j));
    const double a = noise_stream(params.seed, pair_id, step, NoiseChannel::coincidence_x);
    const double b = noise_stream(params.seed, pair_id, step, NoiseChannel::coincidence_y);
    const double norm = std::hypot(a, b);
    if (norm == 0.0) return {1.0, 0.0};
    return {a / norm, b / norm};
}

}  // namespace

std::vector<Vec2> compute_overlap_forces(const SwarmState& state, const SpatialHashGrid& grid,
                                         const SwarmParams& params) {
    const std::size_t n = state.size();
    std::vector<Vec2> disp(n, Vec2{});
    if (params.force_stiffness <= 0.0 || n < 2) return disp;

    const double diameter = 2.0 * params.radius;
    const double gain = 0.5 * params.force_stiffness * params.dt;
    const std::uint64_t step = static_cast<std::uint64_t>(std::llround(state.time / params.dt));
    const auto& kt = kernels::active();

    std::vector<int> neighbors;
    std::vector<double> cx, cy, dx, dy, d2, ox, oy;
    for (std::size_t i = 0; i < n; ++i) {
        grid.gather_neighbors(state.x[i], state.y[i], static_cast<int>(i), neighbors);
        if (neighbors.empty()) continue;
        const std::size_t m = neighbors.size();
        cx.resize(m);
        cy.resize(m);
        dx.resize(m);
        dy.resize(m);
        d2.resize(m);
        ox.resize(m);
        oy.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            cx[k] = state.x[neighbors[k]];
            cy[k] = state.y[neighbors[k]];
        }
        kt.min_image(state.x[i], state.y[i], cx.data(), cy.data(), m, params.domain_width,
                     params.domain_height, grid.periodic, dx.data(), dy.data(), d2.data());
        kt.hooke_push(dx.data(), dy.data(), d2.data(), m, diameter, gain, ox.data(), oy.data());
        for (std::size_t k = 0; k < m; ++k) {
            disp[i].x += ox[k];
            disp[i].y += oy[k];
            if (d2[k] == 0.0) {
                const int j = neighbors[k];
                const Vec2 u = coincidence_direction(params, step, static_cast<int>(i), j);
                const double sign = (static_cast<int>(i) < j) ? 1.0 : -1.0;
                disp[i].x += sign * gain * diameter * u.x;
                disp[i].y += sign * gain * diameter * u.y;
            }
        }
    }
    return disp;
}

ContactGraph build_contact_graph(const SwarmState& state, const SwarmParams& params,
                                 double contact_tolerance) {
    ContactGraph graph;
    graph.n = static_cast<int>(state.size());
    const double threshold = 2.0 * params.radius + contact_tolerance;
    const double threshold2 = threshold * threshold;
    const SpatialHashGrid grid = build_grid(state, params, threshold);
    const auto& kt = kernels::active();

    std::vector<int> neighbors;
    std::vector<double> cx, cy, dx, dy, d2;
    for (std::size_t i = 0; i < state.size(); ++i) {
        grid.gather_neighbors(state.x[i], state.y[i], static_cast<int>(i), neighbors);
        if (neighbors.empty()) continue;
        const std::size_t m = neighbors.size();
        cx.resize(m);
        cy.resize(m);
        dx.resize(m);
        dy.resize(m);
        d2.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            cx[k] = state.x[neighbors[k]];
            cy[k] = state.y[neighbors[k]];
        }
        kt.min_image(state.x[i], state.y[i], cx.data(), cy.data(), m, params.domain_width,
                     params.domain_height, grid.periodic, dx.data(), dy.data(), d2.data());
        for (std::size_t k = 0; k < m; ++k) {
            const int j = neighbors[k];
            if (j > static_cast<int>(i) && d2[k] <= threshold2) {
                graph.edges.emplace_back(static_cast<int>(i), j);
            }
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

}  // namespace mips
