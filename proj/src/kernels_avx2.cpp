#include <cmath>

#include "mips/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

// AVX2 variants of the scalar reference kernels. Per-element arithmetic is
// restricted to correctly-rounded IEEE operations issued in the same order
// as the scalar code (no FMA), so outputs are bit-identical. Tails shorter
// than one vector fall through to the scalar routines.

namespace mips::kernels::avx2 {

namespace {

constexpr int kRoundNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;

inline __m256d negate(__m256d v) {
    return _mm256_xor_pd(v, _mm256_set1_pd(-0.0));
}

}  // namespace

void wrap_into_box(double* xs, double* ys, std::size_t n, double w, double h) {
    const std::size_t main = n & ~std::size_t{3};
    const __m256d wv = _mm256_set1_pd(w);
    const __m256d hv = _mm256_set1_pd(h);
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t i = 0; i < main; i += 4) {
        __m256d x = _mm256_loadu_pd(xs + i);
        x = _mm256_sub_pd(x, _mm256_mul_pd(wv, _mm256_floor_pd(_mm256_div_pd(x, wv))));
        x = _mm256_blendv_pd(x, _mm256_sub_pd(x, wv), _mm256_cmp_pd(x, wv, _CMP_GE_OQ));
        x = _mm256_blendv_pd(x, zero, _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
        _mm256_storeu_pd(xs + i, x);

        __m256d y = _mm256_loadu_pd(ys + i);
        y = _mm256_sub_pd(y, _mm256_mul_pd(hv, _mm256_floor_pd(_mm256_div_pd(y, hv))));
        y = _mm256_blendv_pd(y, _mm256_sub_pd(y, hv), _mm256_cmp_pd(y, hv, _CMP_GE_OQ));
        y = _mm256_blendv_pd(y, zero, _mm256_cmp_pd(y, zero, _CMP_LT_OQ));
        _mm256_storeu_pd(ys + i, y);
    }
    scalar::wrap_into_box(xs + main, ys + main, n - main, w, h);
}

void min_image(double x0, double y0, const double* xs, const double* ys, std::size_t n,
               double w, double h, bool periodic, double* dx, double* dy, double* d2) {
    const std::size_t main = n & ~std::size_t{3};
    const __m256d x0v = _mm256_set1_pd(x0);
    const __m256d y0v = _mm256_set1_pd(y0);
    if (periodic) {
        const __m256d wv = _mm256_set1_pd(w);
        const __m256d hv = _mm256_set1_pd(h);
        for (std::size_t i = 0; i < main; i += 4) {
            __m256d ddx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), x0v);
            __m256d ddy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), y0v);
            ddx = _mm256_sub_pd(ddx, _mm256_mul_pd(wv, _mm256_round_pd(_mm256_div_pd(ddx, wv), kRoundNearest)));
            ddy = _mm256_sub_pd(ddy, _mm256_mul_pd(hv, _mm256_round_pd(_mm256_div_pd(ddy, hv), kRoundNearest)));
            _mm256_storeu_pd(dx + i, ddx);
            _mm256_storeu_pd(dy + i, ddy);
            _mm256_storeu_pd(d2 + i, _mm256_add_pd(_mm256_mul_pd(ddx, ddx), _mm256_mul_pd(ddy, ddy)));
        }
    } else {
        for (std::size_t i = 0; i < main; i += 4) {
            const __m256d ddx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), x0v);
            const __m256d ddy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), y0v);
            _mm256_storeu_pd(dx + i, ddx);
            _mm256_storeu_pd(dy + i, ddy);
            _mm256_storeu_pd(d2 + i, _mm256_add_pd(_mm256_mul_pd(ddx, ddx), _mm256_mul_pd(ddy, ddy)));
        }
    }
    scalar::min_image(x0, y0, xs + main, ys + main, n - main, w, h, periodic,
                      dx + main, dy + main, d2 + main);
}

void bump_weights(const double* d2, std::size_t n, double cutoff, double* w) {
    const double c2 = cutoff * cutoff;
    const std::size_t main = n & ~std::size_t{3};
    const __m256d c2v = _mm256_set1_pd(c2);
    const __m256d negc2 = _mm256_set1_pd(-c2);
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d d2v = _mm256_loadu_pd(d2 + i);
        const __m256d inside = _mm256_cmp_pd(d2v, c2v, _CMP_LT_OQ);
        const int mask = _mm256_movemask_pd(inside);
        if (mask == 0) {
            _mm256_storeu_pd(w + i, _mm256_setzero_pd());
            continue;
        }
        // Exponent argument vectorized; exp itself goes through libm per
        // surviving lane so results match the scalar path exactly.
        alignas(32) double t[4];
        _mm256_store_pd(t, _mm256_div_pd(negc2, _mm256_sub_pd(c2v, d2v)));
        for (int lane = 0; lane < 4; ++lane) {
            w[i + lane] = (mask & (1 << lane)) ? std::exp(t[lane]) : 0.0;
        }
    }
    scalar::bump_weights(d2 + main, n - main, cutoff, w + main);
}

void hooke_push(const double* dx, const double* dy, const double* d2, std::size_t n,
                double diameter, double gain, double* ox, double* oy) {
    const double diam2 = diameter * diameter;
    const std::size_t main = n & ~std::size_t{3};
    const __m256d diamv = _mm256_set1_pd(diameter);
    const __m256d diam2v = _mm256_set1_pd(diam2);
    const __m256d gainv = _mm256_set1_pd(gain);
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d d2v = _mm256_loadu_pd(d2 + i);
        const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(d2v, diam2v, _CMP_LT_OQ),
                                             _mm256_cmp_pd(d2v, zero, _CMP_GT_OQ));
        const __m256d d = _mm256_sqrt_pd(d2v);
        // Divide-by-zero lanes are masked out below; the quiet NaNs they
        // produce never reach the output.
        const __m256d s = _mm256_div_pd(_mm256_mul_pd(gainv, _mm256_sub_pd(diamv, d)), d);
        const __m256d oxv = _mm256_mul_pd(negate(_mm256_loadu_pd(dx + i)), s);
        const __m256d oyv = _mm256_mul_pd(negate(_mm256_loadu_pd(dy + i)), s);
        _mm256_storeu_pd(ox + i, _mm256_and_pd(oxv, inside));
        _mm256_storeu_pd(oy + i, _mm256_and_pd(oyv, inside));
    }
    scalar::hooke_push(dx + main, dy + main, d2 + main, n - main, diameter, gain, ox + main, oy + main);
}

const KernelTable& table() {
    static const KernelTable t = {&wrap_into_box, &min_image, &bump_weights, &hooke_push};
    return t;
}

}  // namespace mips::kernels::avx2

#endif  // __AVX2__
