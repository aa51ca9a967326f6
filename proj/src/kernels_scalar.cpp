#include <cmath>

#include "mips/kernels.hpp"

// Reference implementations. The AVX2 variants mirror these expressions
// operation for operation; keep any change synchronized (the equivalence
// tests compare outputs bit for bit).

namespace mips::kernels::scalar {

void wrap_into_box(double* xs, double* ys, std::size_t n, double w, double h) {
    for (std::size_t i = 0; i < n; ++i) {
        double x = xs[i] - w * std::floor(xs[i] / w);
        if (x >= w) x -= w;
        if (x < 0.0) x = 0.0;
        xs[i] = x;

        double y = ys[i] - h * std::floor(ys[i] / h);
        if (y >= h) y -= h;
        if (y < 0.0) y = 0.0;
        ys[i] = y;
    }
}

void min_image(double x0, double y0, const double* xs, const double* ys, std::size_t n,
               double w, double h, bool periodic, double* dx, double* dy, double* d2) {
    if (periodic) {
        for (std::size_t i = 0; i < n; ++i) {
            double ddx = xs[i] - x0;
            double ddy = ys[i] - y0;
            ddx -= w * std::nearbyint(ddx / w);
            ddy -= h * std::nearbyint(ddy / h);
            dx[i] = ddx;
            dy[i] = ddy;
            d2[i] = ddx * ddx + ddy * ddy;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double ddx = xs[i] - x0;
            const double ddy = ys[i] - y0;
            dx[i] = ddx;
            dy[i] = ddy;
            d2[i] = ddx * ddx + ddy * ddy;
        }
    }
}

void bump_weights(const double* d2, std::size_t n, double cutoff, double* w) {
    const double c2 = cutoff * cutoff;
    for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] < c2) {
            w[i] = std::exp(-c2 / (c2 - d2[i]));
        } else {
            w[i] = 0.0;
        }
    }
}

void hooke_push(const double* dx, const double* dy, const double* d2, std::size_t n,
                double diameter, double gain, double* ox, double* oy) {
    const double diam2 = diameter * diameter;
    for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] < diam2 && d2[i] > 0.0) {
            const double d = std::sqrt(d2[i]);
            const double s = gain * (diameter - d) / d;
            ox[i] = -dx[i] * s;
            oy[i] = -dy[i] * s;
        } else {
            ox[i] = 0.0;
            oy[i] = 0.0;
        }
    }
}

const KernelTable& table() {
    static const KernelTable t = {&wrap_into_box, &min_image, &bump_weights, &hooke_push};
    return t;
}

}  // namespace mips::kernels::scalar
