// Micro-benchmark for the kernel backends: throughput of the scalar
// reference vs the AVX2 variant on simulation-shaped inputs.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "mips/kernels.hpp"

using namespace mips;
using clock_type = std::chrono::steady_clock;

namespace {

double bench(const char* name, const kernels::KernelTable& kt, std::size_t n, int reps) {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> pos(0.0, 50.0);
    std::vector<double> xs(n), ys(n), dx(n), dy(n), d2(n), ox(n), oy(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = pos(gen);
        ys[i] = pos(gen);
    }

    volatile double sink = 0.0;
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) {
        kt.min_image(25.0, 25.0, xs.data(), ys.data(), n, 50.0, 50.0, true, dx.data(), dy.data(),
                     d2.data());
        kt.hooke_push(dx.data(), dy.data(), d2.data(), n, 2.0, 0.25, ox.data(), oy.data());
        kt.bump_weights(d2.data(), n, 5.0, w.data());
        sink = sink + ox[0] + w[0];
    }
    const auto t1 = clock_type::now();
    const double seconds = std::chrono::duration<double>(t1 - t0).count();
    const double evals = static_cast<double>(n) * reps;
    std::printf("%-8s n=%-8zu %8.1f M element-passes/s\n", name, n, evals / seconds / 1e6);
    return seconds;
}

}  // namespace

int main() {
    const int reps = 2000;
    for (const std::size_t n : {std::size_t{64}, std::size_t{1024}, std::size_t{16384}}) {
        bench("scalar", kernels::scalar::table(), n, reps);
        if (kernels::avx2_available()) {
            bench("avx2", kernels::avx2::table(), n, reps);
        }
    }
    if (!kernels::avx2_available()) {
        std::printf("avx2 backend unavailable on this host\n");
    }
    return 0;
}
