#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "mips/kernels.hpp"

using namespace mips;

namespace {

struct RandomInputs {
    std::vector<double> xs, ys;
    explicit RandomInputs(std::size_t n, double lo, double hi, std::uint64_t seed) {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> dist(lo, hi);
        xs.resize(n);
        ys.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = dist(gen);
            ys[i] = dist(gen);
        }
    }
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("wrap_into_box maps into [0, W) for adversarial inputs") {
    const double w = 50.0, h = 37.5;
    std::vector<double> xs = {50.0 + 0.3, -0.2, 25.0, -1e-18, 0.0, 49.999999999999993,
                              -150.0000000001, 1e-300, -1e-300, 150.0};
    std::vector<double> ys = xs;
    kernels::scalar::wrap_into_box(xs.data(), ys.data(), xs.size(), w, h);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(xs[i] >= 0.0);
        CHECK(xs[i] < w);
        CHECK(ys[i] >= 0.0);
        CHECK(ys[i] < h);
    }
    CHECK(xs[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(xs[1] == doctest::Approx(w - 0.2).epsilon(1e-12));
    CHECK(xs[2] == 25.0);
}

TEST_CASE("scalar and AVX2 kernels are bit-identical") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 unavailable on this host; equivalence test skipped");
        return;
    }
    std::mt19937_64 gen(99);
    // Lengths straddle the vector width to exercise tails.
    for (const std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                                std::size_t{16}, std::size_t{65}, std::size_t{1024}}) {
        const double w = 50.0, h = 40.0;
        {
            RandomInputs in(n, -2.0 * w, 3.0 * w, gen());
            auto xs_a = in.xs, ys_a = in.ys, xs_b = in.xs, ys_b = in.ys;
            kernels::scalar::wrap_into_box(xs_a.data(), ys_a.data(), n, w, h);
            kernels::avx2::wrap_into_box(xs_b.data(), ys_b.data(), n, w, h);
            CHECK(bit_equal(xs_a, xs_b));
            CHECK(bit_equal(ys_a, ys_b));
        }
        {
            RandomInputs in(n, 0.0, w, gen());
            std::vector<double> dx_a(n), dy_a(n), d2_a(n), dx_b(n), dy_b(n), d2_b(n);
            for (const bool periodic : {true, false}) {
                kernels::scalar::min_image(12.5, 30.0, in.xs.data(), in.ys.data(), n, w, h, periodic,
                                           dx_a.data(), dy_a.data(), d2_a.data());
                kernels::avx2::min_image(12.5, 30.0, in.xs.data(), in.ys.data(), n, w, h, periodic,
                                         dx_b.data(), dy_b.data(), d2_b.data());
                CHECK(bit_equal(dx_a, dx_b));
                CHECK(bit_equal(dy_a, dy_b));
                CHECK(bit_equal(d2_a, d2_b));
            }
        }
        {
            const double cutoff = 8.0;
            std::uniform_real_distribution<double> dist(0.0, 2.0 * cutoff * cutoff);
            std::vector<double> d2(n);
            for (auto& v : d2) v = dist(gen);
            if (n > 2) {
                d2[0] = 0.0;
                d2[1] = cutoff * cutoff;  // exactly on the cutoff: outside
            }
            std::vector<double> w_a(n), w_b(n);
            kernels::scalar::bump_weights(d2.data(), n, cutoff, w_a.data());
            kernels::avx2::bump_weights(d2.data(), n, cutoff, w_b.data());
            CHECK(bit_equal(w_a, w_b));
        }
        {
            const double diameter = 2.0;
            RandomInputs in(n, -2.5, 2.5, gen());
            std::vector<double> d2(n), ox_a(n), oy_a(n), ox_b(n), oy_b(n);
            for (std::size_t i = 0; i < n; ++i) d2[i] = in.xs[i] * in.xs[i] + in.ys[i] * in.ys[i];
            if (n > 1) d2[0] = 0.0;  // coincidence lane must come out zero
            kernels::scalar::hooke_push(in.xs.data(), in.ys.data(), d2.data(), n, diameter, 0.25,
                                        ox_a.data(), oy_a.data());
            kernels::avx2::hooke_push(in.xs.data(), in.ys.data(), d2.data(), n, diameter, 0.25,
                                      ox_b.data(), oy_b.data());
            CHECK(bit_equal(ox_a, ox_b));
            CHECK(bit_equal(oy_a, oy_b));
        }
    }
}

TEST_CASE("bump weights match the closed-form kernel values") {
    const double dc = 5.0;
    const double d2[3] = {0.0, dc * dc, dc * dc / 2.0};
    double w[3];
    kernels::scalar::bump_weights(d2, 3, dc, w);
    CHECK(w[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));  // w(0) = e^-1
    CHECK(w[1] == 0.0);                                             // compact support
    CHECK(w[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));  // w(dc/sqrt 2) = e^-2
}

TEST_CASE("hooke_push zeroes non-overlapping and coincident lanes") {
    const double dx[3] = {1.0, 3.0, 0.0};
    const double dy[3] = {0.0, 0.0, 0.0};
    const double d2[3] = {1.0, 9.0, 0.0};
    double ox[3], oy[3];
    kernels::scalar::hooke_push(dx, dy, d2, 3, 2.0, 0.5, ox, oy);
    CHECK(ox[0] == doctest::Approx(-0.5).epsilon(1e-15));  // gain*(2-1)/1 * -dx
    CHECK(ox[1] == 0.0);
    CHECK(ox[2] == 0.0);
    CHECK(oy[0] == 0.0);
}

TEST_CASE("backend dispatch reports a valid active table") {
    const auto& table = kernels::active();
    CHECK(table.wrap_into_box != nullptr);
    CHECK(table.min_image != nullptr);
    CHECK(table.bump_weights != nullptr);
    CHECK(table.hooke_push != nullptr);
    if (kernels::avx2_available()) {
        CHECK(kernels::compiled_with_avx2());
    }
}
