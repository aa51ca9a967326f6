#pragma once

#include <cstddef>

namespace mips::kernels {

// Data-parallel inner loops of the simulator and the density analysis.
// Every routine has a scalar reference implementation and, on x86-64, an
// AVX2 variant. Variants are bit-exact equivalents of the scalar code:
// they use only correctly-rounded IEEE operations in the same order per
// element (no FMA contraction), with transcendental calls delegated to the
// same libm entry points. The active variant is picked once at runtime.

enum class Backend { scalar, avx2 };

struct KernelTable {
    // Periodic wrap of n positions into [0, w) x [0, h).
    void (*wrap_into_box)(double* xs, double* ys, std::size_t n, double w, double h);

    // Displacement from (x0, y0) to each of n points, minimum-image when
    // periodic, plus squared distance.
    void (*min_image)(double x0, double y0, const double* xs, const double* ys, std::size_t n,
                      double w, double h, bool periodic, double* dx, double* dy, double* d2);

    // Compact-support smoothing kernel w(d) = exp(-dc^2 / (dc^2 - d^2)) for
    // d < dc, 0 otherwise, evaluated from squared distances.
    void (*bump_weights)(const double* d2, std::size_t n, double cutoff, double* w);

    // Hookean excluded-volume push on the focal robot from each candidate:
    // for 0 < d < diameter, out = -(dx, dy)/d * gain * (diameter - d);
    // zero otherwise (exact coincidences are left to the caller).
    void (*hooke_push)(const double* dx, const double* dy, const double* d2, std::size_t n,
                       double diameter, double gain, double* ox, double* oy);
};

namespace scalar {
void wrap_into_box(double* xs, double* ys, std::size_t n, double w, double h);
void min_image(double x0, double y0, const double* xs, const double* ys, std::size_t n,
               double w, double h, bool periodic, double* dx, double* dy, double* d2);
void bump_weights(const double* d2, std::size_t n, double cutoff, double* w);
void hooke_push(const double* dx, const double* dy, const double* d2, std::size_t n,
                double diameter, double gain, double* ox, double* oy);
const KernelTable& table();
}  // namespace scalar

namespace avx2 {
// Declared unconditionally; available() reports whether this build carries
// the AVX2 translation unit and the CPU supports it.
void wrap_into_box(double* xs, double* ys, std::size_t n, double w, double h);
void min_image(double x0, double y0, const double* xs, const double* ys, std::size_t n,
               double w, double h, bool periodic, double* dx, double* dy, double* d2);
void bump_weights(const double* d2, std::size_t n, double cutoff, double* w);
void hooke_push(const double* dx, const double* dy, const double* d2, std::size_t n,
                double diameter, double gain, double* ox, double* oy);
const KernelTable& table();
}  // namespace avx2

bool compiled_with_avx2();
bool avx2_available();

// Active table: AVX2 when available unless overridden by set_backend() or
// the MIPSIM_KERNELS environment variable ("scalar" or "avx2"). Selection
// happens once; call set_backend before any simulation work.
const KernelTable& active();
Backend active_backend();
void set_backend(Backend b);

}  // namespace mips::kernels
