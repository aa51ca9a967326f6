#include "mips/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mips::kernels {

bool compiled_with_avx2() {
#if defined(MIPS_HAVE_AVX2)
    return true;
#else
    return false;
#endif
}

bool avx2_available() {
#if defined(MIPS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

Backend initial_backend() {
    if (const char* env = std::getenv("MIPSIM_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::scalar;
        if (v == "avx2") {
            if (!avx2_available()) {
                throw std::runtime_error("MIPSIM_KERNELS=avx2 requested but AVX2 is unavailable");
            }
            return Backend::avx2;
        }
        throw std::runtime_error("MIPSIM_KERNELS must be 'scalar' or 'avx2', got '" + v + "'");
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{initial_backend()};
    return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available()) {
        throw std::runtime_error("AVX2 kernels unavailable on this host/build");
    }
    backend_slot().store(b, std::memory_order_relaxed);
}

const KernelTable& active() {
#if defined(MIPS_HAVE_AVX2)
    if (active_backend() == Backend::avx2) return avx2::table();
#endif
    return scalar::table();
}

}  // namespace mips::kernels
