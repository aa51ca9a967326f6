#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mips/params.hpp"
#include "mips/rng.hpp"

using namespace mips;

namespace {

SwarmParams reference_params() {
    SwarmParams p;
    p.n_robots = 292;
    p.radius = 1.0;
    p.speed = 4.0;
    p.diff_rot = 1e-4;
    p.diff_trans = 1e-5;
    p.domain_width = 50.0;
    p.domain_height = 50.0;
    p.dt = 0.002;
    p.seed = 7;
    p.force_stiffness = 250.0;
    p.n_steps = 100;
    return p;
}

bool has_violation(const std::vector<Violation>& vs, const std::string& code) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

}  // namespace

TEST_CASE("reference parameter set validates") {
    CHECK(validate_params(reference_params()).empty());
    CHECK_NOTHROW(validated(reference_params()));
}

TEST_CASE("degenerate domain is rejected") {
    SwarmParams p = reference_params();
    p.n_robots = 1;
    p.domain_width = 1.0;
    p.domain_height = 1.0;
    const auto vs = validate_params(p);
    CHECK(has_violation(vs, "DegenerateDomain"));
}

TEST_CASE("over-packed configuration is rejected") {
    SwarmParams p = reference_params();
    p.n_robots = 100;
    p.domain_width = 10.0;
    p.domain_height = 10.0;
    const auto vs = validate_params(p);
    CHECK(has_violation(vs, "OverPacked"));  // 100 pi > 100
}

TEST_CASE("required-positive fields are rejected when nonpositive") {
    SwarmParams p = reference_params();
    p.diff_rot = 0.0;
    CHECK(has_violation(validate_params(p), "NonPositive"));

    p = reference_params();
    p.dt = -0.1;
    CHECK(has_violation(validate_params(p), "NonPositive"));

    p = reference_params();
    p.speed = -1.0;
    CHECK(has_violation(validate_params(p), "NonPositive"));

    // Validation is total: even NaN-poisoned inputs produce a named violation.
    p = reference_params();
    p.radius = std::nan("");
    CHECK_FALSE(validate_params(p).empty());
}

TEST_CASE("validated() throws with the violation list") {
    SwarmParams p = reference_params();
    p.n_robots = 0;
    CHECK_THROWS_AS(validated(p), ConfigError);
    try {
        validated(p);
    } catch (const ConfigError& e) {
        CHECK_FALSE(e.violations().empty());
    }
}

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Published test vectors for the 10-round 4x32 generator.
    auto r = rng::philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(r[0] == 0x6627e8d5u);
    CHECK(r[1] == 0xe169c58du);
    CHECK(r[2] == 0xbc57ac4cu);
    CHECK(r[3] == 0x9b00dbd8u);

    r = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu});
    CHECK(r[0] == 0x408f276du);
    CHECK(r[1] == 0x41c83b0eu);
    CHECK(r[2] == 0xa20bc7c6u);
    CHECK(r[3] == 0x6d5451fdu);

    r = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u});
    CHECK(r[0] == 0xd16cfe09u);
    CHECK(r[1] == 0x94fdccebu);
    CHECK(r[2] == 0x5001e420u);
    CHECK(r[3] == 0x24126ea1u);
}

TEST_CASE("noise stream is deterministic and order independent") {
    const double a = noise_stream(42, 7, 1000, NoiseChannel::theta);
    const double b = noise_stream(42, 7, 1000, NoiseChannel::theta);
    CHECK(a == b);

    // Shuffled query order changes nothing.
    std::vector<std::uint64_t> ids(100);
    for (std::uint64_t i = 0; i < 100; ++i) ids[i] = i;
    std::vector<double> in_order(100);
    for (std::uint64_t i = 0; i < 100; ++i) in_order[i] = noise_stream(1, i, 5, NoiseChannel::x);
    std::mt19937_64 gen(3);
    std::shuffle(ids.begin(), ids.end(), gen);
    for (const std::uint64_t i : ids) {
        CHECK(noise_stream(1, i, 5, NoiseChannel::x) == in_order[i]);
    }
}

TEST_CASE("noise stream moments over one million draws") {
    // Thresholds frozen from the statistical oracle: |mean| < 5 sigma/sqrt(n),
    // variance within 1% of 1.
    const std::uint64_t seed = 20240901;
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::uint64_t robot = 0; robot < 1000; ++robot) {
        for (std::uint64_t step = 0; step < 334; ++step) {
            const double v = noise_stream(seed, robot, step, NoiseChannel::y);
            sum += v;
            sum2 += v * v;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("distinct seeds give distinct first deviates") {
    CHECK(noise_stream(1, 0, 0, NoiseChannel::x) != noise_stream(2, 0, 0, NoiseChannel::x));
}

TEST_CASE("channels are independent streams") {
    CHECK(noise_stream(9, 3, 14, NoiseChannel::x) != noise_stream(9, 3, 14, NoiseChannel::y));
    CHECK(uniform_stream(9, 3, 14, NoiseChannel::place_x) !=
          uniform_stream(9, 3, 14, NoiseChannel::place_y));
}

TEST_CASE("uniform stream stays inside (0, 1)") {
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double u = uniform_stream(5, i, 0, NoiseChannel::place_x);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}
