#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "mips/collisions.hpp"
#include "mips/kernels.hpp"

using namespace mips;

namespace {

SwarmParams box_params(std::int64_t n, double w, double h, std::uint64_t seed = 1) {
    SwarmParams p;
    p.n_robots = n;
    p.radius = 1.0;
    p.speed = 4.0;
    p.diff_trans = 1e-5;
    p.diff_rot = 1e-4;
    p.domain_width = w;
    p.domain_height = h;
    p.dt = 0.002;
    p.seed = seed;
    p.force_stiffness = 250.0;
    p.n_steps = 0;
    return p;
}

SwarmState state_at(const SwarmParams& p, std::initializer_list<std::pair<double, double>> pts) {
    SwarmState s = SwarmState::zeros(pts.size());
    std::size_t i = 0;
    for (const auto& [x, y] : pts) {
        s.x[i] = x;
        s.y[i] = y;
        ++i;
    }
    s.ux = s.x;
    s.uy = s.y;
    (void)p;
    return s;
}

// O(N^2) all-pairs overlap detection, the oracle for the grid path.
std::set<std::pair<int, int>> brute_force_pairs(const SwarmState& s, const SwarmParams& p,
                                                double threshold) {
    std::set<std::pair<int, int>> pairs;
    const bool periodic = p.boundary_mode == BoundaryMode::periodic;
    const double t2 = threshold * threshold;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double dx, dy, d2;
            kernels::scalar::min_image(s.x[i], s.y[i], &s.x[j], &s.y[j], 1, p.domain_width,
                                       p.domain_height, periodic, &dx, &dy, &d2);
            if (d2 <= t2) pairs.insert({static_cast<int>(i), static_cast<int>(j)});
        }
    }
    return pairs;
}

SwarmState random_state(const SwarmParams& p, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> ux(0.0, p.domain_width);
    std::uniform_real_distribution<double> uy(0.0, p.domain_height);
    SwarmState s = SwarmState::zeros(p.n_robots);
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        s.x[i] = ux(gen);
        s.y[i] = uy(gen);
    }
    s.ux = s.x;
    s.uy = s.y;
    return s;
}

}  // namespace

TEST_CASE("grid partitions: one robot occupies exactly one cell") {
    const SwarmParams p = box_params(1, 20.0, 20.0);
    const SwarmState s = state_at(p, {{5.0, 5.0}});
    const SpatialHashGrid grid = build_grid(s, p);
    int occupied = 0, total = 0;
    for (const auto& cell : grid.cells) {
        if (!cell.empty()) ++occupied;
        total += static_cast<int>(cell.size());
    }
    CHECK(occupied == 1);
    CHECK(total == 1);
}

TEST_CASE("grid occupancy sums to N") {
    const SwarmParams p = box_params(200, 30.0, 22.0);
    std::mt19937_64 gen(7);
    const SwarmState s = random_state(p, gen);
    const SpatialHashGrid grid = build_grid(s, p);
    std::size_t total = 0;
    for (const auto& cell : grid.cells) total += cell.size();
    CHECK(total == s.size());
}

TEST_CASE("near-contact pair straddling a cell boundary is discoverable") {
    const SwarmParams p = box_params(2, 20.0, 20.0);
    // Distance 1.9 r < 2r, placed across a cell boundary.
    const SwarmState s = state_at(p, {{4.95, 5.0}, {6.85, 5.0}});
    const SpatialHashGrid grid = build_grid(s, p);
    std::vector<int> neighbors;
    grid.gather_neighbors(s.x[0], s.y[0], 0, neighbors);
    CHECK(std::find(neighbors.begin(), neighbors.end(), 1) != neighbors.end());
    grid.gather_neighbors(s.x[1], s.y[1], 1, neighbors);
    CHECK(std::find(neighbors.begin(), neighbors.end(), 0) != neighbors.end());
}

TEST_CASE("no overlaps produce zero displacements") {
    const SwarmParams p = box_params(3, 30.0, 30.0);
    const SwarmState s = state_at(p, {{5.0, 5.0}, {10.0, 5.0}, {20.0, 14.0}});
    const auto disp = compute_overlap_forces(s, build_grid(s, p), p);
    for (const auto& d : disp) {
        CHECK(d.x == 0.0);
        CHECK(d.y == 0.0);
    }
}

TEST_CASE("overlapping pair receives equal and opposite spring displacements") {
    const SwarmParams p = box_params(2, 30.0, 30.0);
    const double delta = 0.25;  // overlap
    const SwarmState s = state_at(p, {{10.0, 10.0}, {10.0 + 2.0 - delta, 10.0}});
    const auto disp = compute_overlap_forces(s, build_grid(s, p), p);
    const double expected = p.force_stiffness * delta * p.dt / 2.0;
    CHECK(disp[0].x == doctest::Approx(-expected).epsilon(1e-13));
    CHECK(disp[0].y == 0.0);
    CHECK(disp[1].x == doctest::Approx(expected).epsilon(1e-13));
    CHECK(disp[1].y == 0.0);
    CHECK(disp[0].x + disp[1].x == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("symmetric collinear triple leaves the middle robot stationary") {
    const SwarmParams p = box_params(3, 30.0, 30.0);
    // Middle disk overlaps both neighbors symmetrically.
    const SwarmState s = state_at(p, {{8.5, 10.0}, {10.0, 10.0}, {11.5, 10.0}});
    const auto disp = compute_overlap_forces(s, build_grid(s, p), p);
    CHECK(disp[1].x == 0.0);
    CHECK(disp[1].y == 0.0);
    CHECK(disp[0].x < 0.0);
    CHECK(disp[2].x > 0.0);
}

TEST_CASE("exact coincidence separates along a reproducible direction") {
    const SwarmParams p = box_params(2, 30.0, 30.0);
    const SwarmState s = state_at(p, {{10.0, 10.0}, {10.0, 10.0}});
    const auto disp_a = compute_overlap_forces(s, build_grid(s, p), p);
    const auto disp_b = compute_overlap_forces(s, build_grid(s, p), p);
    CHECK(disp_a[0].x == disp_b[0].x);  // reproducible
    CHECK(disp_a[0].y == disp_b[0].y);
    CHECK(disp_a[0].x == -disp_a[1].x);  // antisymmetric
    CHECK(disp_a[0].y == -disp_a[1].y);
    const double magnitude = std::hypot(disp_a[0].x, disp_a[0].y);
    CHECK(magnitude == doctest::Approx(0.5 * p.force_stiffness * p.dt * 2.0 * p.radius).epsilon(1e-12));
}

TEST_CASE("displacement sum cancels over a crowded swarm") {
    SwarmParams p = box_params(120, 25.0, 25.0);
    std::mt19937_64 gen(12);
    const SwarmState s = random_state(p, gen);
    const auto disp = compute_overlap_forces(s, build_grid(s, p), p);
    double sx = 0.0, sy = 0.0;
    for (const auto& d : disp) {
        sx += d.x;
        sy += d.y;
    }
    const double bound = 1e-9 * p.force_stiffness * p.dt * static_cast<double>(p.n_robots);
    CHECK(std::abs(sx) <= bound);
    CHECK(std::abs(sy) <= bound);
}

TEST_CASE("forces strictly reduce the overlap of an isolated pair") {
    SwarmParams p = box_params(2, 30.0, 30.0);
    p.force_stiffness = 250.0;  // k dt = 0.5 < 1: no overshoot
    const SwarmState s = state_at(p, {{10.0, 10.0}, {11.2, 10.0}});
    const auto disp = compute_overlap_forces(s, build_grid(s, p), p);
    const double before = 1.2;
    const double after = std::abs((s.x[1] + disp[1].x) - (s.x[0] + disp[0].x));
    CHECK(after > before);
    CHECK(after < 2.0 * p.radius);  // still not fully separated in one step
}

TEST_CASE("contact chain of five disks yields four edges") {
    const SwarmParams p = box_params(5, 40.0, 40.0);
    const SwarmState s =
        state_at(p, {{10.0, 10.0}, {12.0, 10.0}, {14.0, 10.0}, {16.0, 10.0}, {18.0, 10.0}});
    const ContactGraph g = build_contact_graph(s, p, 0.05);
    CHECK(g.edges.size() == 4);
    CHECK(g.edges[0] == std::pair<int, int>{0, 1});
    CHECK(g.edges[3] == std::pair<int, int>{3, 4});
}

TEST_CASE("distant disks yield no edges") {
    const SwarmParams p = box_params(3, 40.0, 40.0);
    const SwarmState s = state_at(p, {{5.0, 5.0}, {15.0, 5.0}, {25.0, 25.0}});
    CHECK(build_contact_graph(s, p, 0.05).edges.empty());
}

TEST_CASE("pair touching across the periodic seam is detected") {
    const SwarmParams p = box_params(2, 20.0, 20.0);
    // Distance through the boundary: 1.9 r < 2r; direct distance 18.1.
    const SwarmState s = state_at(p, {{0.95, 5.0}, {19.05, 5.0}});
    const ContactGraph periodic_graph = build_contact_graph(s, p, 0.05);
    REQUIRE(periodic_graph.edges.size() == 1);
    CHECK(periodic_graph.edges[0] == std::pair<int, int>{0, 1});

    SwarmParams reflecting = p;
    reflecting.boundary_mode = BoundaryMode::reflecting;
    CHECK(build_contact_graph(s, reflecting, 0.05).edges.empty());
}

TEST_CASE("grid pair detection matches the all-pairs oracle") {
    std::mt19937_64 gen(2025);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> nd(1, 64);
        std::uniform_real_distribution<double> wd(6.0, 40.0);
        SwarmParams p = box_params(nd(gen), wd(gen), wd(gen));
        p.boundary_mode = (trial % 2 == 0) ? BoundaryMode::periodic : BoundaryMode::reflecting;
        const SwarmState s = random_state(p, gen);
        const double tol = 0.05 * p.radius;

        const ContactGraph g = build_contact_graph(s, p, tol);
        const auto expected = brute_force_pairs(s, p, 2.0 * p.radius + tol);
        std::set<std::pair<int, int>> got(g.edges.begin(), g.edges.end());
        CHECK(got == expected);
        CHECK(g.edges.size() == got.size());  // no duplicate edges
    }
}
