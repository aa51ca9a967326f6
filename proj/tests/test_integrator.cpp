#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mips/analysis.hpp"
#include "mips/integrator.hpp"
#include "mips/kernels.hpp"
#include "mips/rng.hpp"

using namespace mips;

namespace {

SwarmParams free_params(std::int64_t n, double v0, double dt_coeff, double dr_coeff, double dt,
                        std::uint64_t seed) {
    SwarmParams p;
    p.n_robots = n;
    p.radius = 1.0;
    p.speed = v0;
    p.diff_trans = dt_coeff;
    p.diff_rot = dr_coeff;
    p.domain_width = 1000.0;
    p.domain_height = 1000.0;
    p.dt = dt;
    p.seed = seed;
    p.force_stiffness = 0.0;
    p.n_steps = 0;
    return p;
}

SwarmState spread_state(const SwarmParams& p) {
    SwarmState s = SwarmState::zeros(p.n_robots);
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        s.x[i] = uniform_stream(p.seed, i, 0, NoiseChannel::place_x) * p.domain_width;
        s.y[i] = uniform_stream(p.seed, i, 0, NoiseChannel::place_y) * p.domain_height;
        s.theta[i] = uniform_stream(p.seed, i, 0, NoiseChannel::place_theta) * 2.0 * std::numbers::pi;
    }
    s.ux = s.x;
    s.uy = s.y;
    return s;
}

SwarmState advance(SwarmState s, const SwarmParams& p, std::int64_t steps) {
    for (std::int64_t k = 0; k < steps; ++k) {
        s = step({s, {}, p, k});
    }
    return s;
}

// Least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace

TEST_CASE("noiseless straight-line motion is exact") {
    SwarmParams p = free_params(1, 1.0, 0.0, 0.0, 0.1, 3);
    SwarmState s = SwarmState::zeros(1);
    s.x[0] = 5.0;
    s.y[0] = 5.0;
    s.theta[0] = 0.0;
    s.ux = s.x;
    s.uy = s.y;
    const SwarmState next = step({s, {}, p, 0});
    CHECK(next.x[0] == 5.1);  // v0 cos(0) dt added exactly
    CHECK(next.y[0] == 5.0);
    CHECK(next.theta[0] == 0.0);
    CHECK(next.time == doctest::Approx(0.1));
}

TEST_CASE("two runs with identical params are bit-identical") {
    const SwarmParams p = free_params(64, 2.0, 1e-3, 0.5, 0.01, 11);
    const SwarmState init = spread_state(p);
    const SwarmState a = advance(init, p, 50);
    const SwarmState b = advance(init, p, 50);
    CHECK(a == b);
}

TEST_CASE("pure translational diffusion recovers the 2D diffusion law") {
    // v0 = 0: MSD(t) = 4 Dt t. Frozen seed; 10% tolerance.
    const double dt_coeff = 1e-3;
    SwarmParams p = free_params(500, 0.0, dt_coeff, 1.0, 0.01, 2024);
    SwarmState s = spread_state(p);
    const SwarmState init = s;
    const std::int64_t steps = 1000;
    s = advance(std::move(s), p, steps);
    double msd = 0.0;
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        const double dx = s.ux[i] - init.ux[i];
        const double dy = s.uy[i] - init.uy[i];
        msd += dx * dx + dy * dy;
    }
    msd /= static_cast<double>(p.n_robots);
    const double t = static_cast<double>(steps) * p.dt;
    CHECK(msd / t == doctest::Approx(4.0 * dt_coeff).epsilon(0.10));
}

TEST_CASE("angular variance grows as 2 Dr t") {
    const double dr_coeff = 0.1;
    SwarmParams p = free_params(2000, 0.0, 0.0, dr_coeff, 0.01, 515);
    SwarmState s = spread_state(p);
    const SwarmState init = s;
    const std::int64_t steps = 500;
    s = advance(std::move(s), p, steps);
    double var = 0.0;
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        const double d = s.theta[i] - init.theta[i];
        var += d * d;
    }
    var /= static_cast<double>(p.n_robots);
    const double t = static_cast<double>(steps) * p.dt;
    CHECK(var == doctest::Approx(2.0 * dr_coeff * t).epsilon(0.10));
}

TEST_CASE("long-horizon MSD slope matches the effective diffusion") {
    // v0 = 1, Dr = 1, Dt = 0.01: D = v0^2/(2 Dr) + Dt = 0.51, slope 4D.
    SwarmParams p = free_params(600, 1.0, 0.01, 1.0, 0.01, 77);
    SwarmState s = spread_state(p);
    const SwarmState init = s;
    std::vector<double> times, msds;
    const std::int64_t steps = 2000;
    for (std::int64_t k = 0; k < steps; ++k) {
        s = step({s, {}, p, k});
        const double t = s.time;
        if (t >= 10.0) {  // well past the persistence time 1/Dr
            double msd = 0.0;
            for (std::int64_t i = 0; i < p.n_robots; ++i) {
                const double dx = s.ux[i] - init.ux[i];
                const double dy = s.uy[i] - init.uy[i];
                msd += dx * dx + dy * dy;
            }
            times.push_back(t);
            msds.push_back(msd / static_cast<double>(p.n_robots));
        }
    }
    const double slope = ols_slope(times, msds);
    const double effective = 1.0 / (2.0 * 1.0) + 0.01;
    CHECK(slope == doctest::Approx(4.0 * effective).epsilon(0.15));
}

TEST_CASE("periodic wrap examples") {
    SwarmParams p = free_params(1, 0.0, 0.0, 1.0, 0.1, 0);
    p.domain_width = 7.0;
    p.domain_height = 5.0;
    CHECK(wrap_periodic({7.3, 2.0, 1.0}, p).x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(wrap_periodic({-0.2, 2.0, 1.0}, p).x == doctest::Approx(6.8).epsilon(1e-12));
    const RobotPose inside{3.0, 2.0, 1.0};
    const RobotPose wrapped = wrap_periodic(inside, p);
    CHECK(wrapped.x == 3.0);
    CHECK(wrapped.y == 2.0);
    CHECK(wrapped.theta == 1.0);
}

TEST_CASE("reflection examples") {
    SwarmParams p = free_params(1, 0.0, 0.0, 1.0, 0.1, 0);
    p.domain_width = 10.0;
    p.domain_height = 10.0;
    p.radius = 1.0;
    p.boundary_mode = BoundaryMode::reflecting;

    const RobotPose left = reflect_boundary({-0.1, 5.0, std::numbers::pi}, p);
    CHECK(left.x == 1.0);
    CHECK(left.theta == doctest::Approx(0.0).epsilon(1e-15));

    const RobotPose interior = reflect_boundary({5.0, 5.0, 0.3}, p);
    CHECK(interior.x == 5.0);
    CHECK(interior.y == 5.0);
    CHECK(interior.theta == 0.3);

    // Corner violation composes both reflections: position clamps to (r, r).
    const RobotPose corner = reflect_boundary({-0.5, -0.2, 0.7}, p);
    CHECK(corner.x == 1.0);
    CHECK(corner.y == 1.0);
    CHECK(corner.theta == doctest::Approx(0.7 - std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("global translation leaves pairwise minimum-image distances invariant") {
    SwarmParams p = free_params(32, 1.5, 1e-3, 0.7, 0.01, 99);
    p.domain_width = 64.0;
    p.domain_height = 64.0;
    SwarmState a = spread_state(p);
    SwarmState b = a;
    const double shift = 16.0;  // dyadic: exact in floating point
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        b.x[i] += shift;
        b.y[i] += shift;
    }
    kernels::scalar::wrap_into_box(b.x.data(), b.y.data(), p.n_robots, p.domain_width,
                                   p.domain_height);
    // Identical noise tables apply to both (same seed, same step indices).
    const SwarmState fa = advance(std::move(a), p, 20);
    const SwarmState fb = advance(std::move(b), p, 20);
    for (std::int64_t i = 0; i < p.n_robots; ++i) {
        for (std::int64_t j = i + 1; j < p.n_robots; ++j) {
            double dxa, dya, d2a, dxb, dyb, d2b;
            kernels::scalar::min_image(fa.x[i], fa.y[i], &fa.x[j], &fa.y[j], 1, p.domain_width,
                                       p.domain_height, true, &dxa, &dya, &d2a);
            kernels::scalar::min_image(fb.x[i], fb.y[i], &fb.x[j], &fb.y[j], 1, p.domain_width,
                                       p.domain_height, true, &dxb, &dyb, &d2b);
            CHECK(std::sqrt(d2a) == doctest::Approx(std::sqrt(d2b)).epsilon(1e-9));
        }
    }
}

TEST_CASE("periodic step keeps every robot inside the domain") {
    SwarmParams p = free_params(128, 3.0, 1e-2, 0.2, 0.01, 5);
    p.domain_width = 12.0;
    p.domain_height = 9.0;
    SwarmState s = spread_state(p);
    kernels::scalar::wrap_into_box(s.x.data(), s.y.data(), p.n_robots, p.domain_width, p.domain_height);
    for (std::int64_t k = 0; k < 200; ++k) {
        s = step({s, {}, p, k});
        for (std::int64_t i = 0; i < p.n_robots; ++i) {
            CHECK(s.x[i] >= 0.0);
            CHECK(s.x[i] < p.domain_width);
            CHECK(s.y[i] >= 0.0);
            CHECK(s.y[i] < p.domain_height);
        }
    }
    CHECK(s.size() == 128);
}
