#include "mips/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mips/quadrature.hpp"

namespace mips::theory {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_density_in_range(double lambda, double packing, bool allow_zero, bool allow_packing) {
    if (lambda < 0.0 || (!allow_zero && lambda == 0.0)) {
        throw TheoryError(TheoryErrc::nonpositive_density,
                          "density must be " + std::string(allow_zero ? ">= 0" : "> 0") + ", got " +
                              std::to_string(lambda));
    }
    if (lambda > packing || (!allow_packing && lambda == packing)) {
        throw TheoryError(TheoryErrc::density_above_close_packing,
                          "density " + std::to_string(lambda) + " exceeds packing density " +
                              std::to_string(packing));
    }
}

}  // namespace

double effective_diffusion(const TheoryInputs& in) {
    return in.speed * in.speed / (2.0 * in.diff_rot) + in.diff_trans;
}

double activity(const TheoryInputs& in) {
    return in.speed / (2.0 * in.radius * in.diff_rot);
}

double collision_time(const TheoryInputs& in, double lambda) {
    const double rate = 4.0 * in.radius * (4.0 / std::numbers::pi) * in.speed * lambda;
    if (rate <= 0.0) return kInf;
    return 1.0 / rate;
}

double packing_density(const TheoryInputs& in) {
    if (in.speed <= 0.0) {
        throw TheoryError(TheoryErrc::degenerate_speed, "packing density undefined at zero speed");
    }
    return 1.0 / (4.0 * in.radius * (4.0 / std::numbers::pi) * in.speed * in.resolve_time);
}

double speed_at_density(const TheoryInputs& in, double lambda, SpeedForm form) {
    const double packing = packing_density(in);
    require_density_in_range(lambda, packing, /*allow_zero=*/true, /*allow_packing=*/true);
    if (form == SpeedForm::linear) {
        return in.speed * (1.0 - lambda / packing);
    }
    // tau_c is +inf at lambda = 0, which cleanly yields the free speed.
    const double tau_c = collision_time(in, lambda);
    return in.speed * (1.0 - in.resolve_time / (tau_c + in.resolve_time));
}

double free_energy_density(const TheoryInputs& in, double lambda, double rel_tol) {
    const double packing = packing_density(in);
    const bool endpoint_ok = in.diff_trans > 0.0;
    require_density_in_range(lambda, packing, /*allow_zero=*/false, /*allow_packing=*/endpoint_ok);

    const double entropy = lambda * (std::log(lambda) - 1.0);
    const auto integrand = [&](double s) {
        const double v = in.speed * (1.0 - s / packing);
        return 0.5 * std::log(v * v / in.diff_rot + 2.0 * in.diff_trans);
    };
    return entropy + quad::integrate(integrand, 0.0, lambda, rel_tol);
}

double free_energy_second_derivative(const TheoryInputs& in, double lambda) {
    const double packing = packing_density(in);
    require_density_in_range(lambda, packing, /*allow_zero=*/false, /*allow_packing=*/false);
    const double v = in.speed * (1.0 - lambda / packing);
    const double dv = -in.speed / packing;
    return 1.0 / lambda + (v * dv / in.diff_rot) / (v * v / in.diff_rot + 2.0 * in.diff_trans);
}

SpinodalResult spinodal_densities(const TheoryInputs& in) {
    SpinodalResult out;
    out.packing_density = packing_density(in);
    const double threshold2 = 16.0 * in.diff_trans * in.diff_rot;
    out.exists = in.speed * in.speed > threshold2;
    if (!out.exists) return out;

    const double disc = std::sqrt(1.0 - threshold2 / (in.speed * in.speed));
    out.spinodal_low = out.packing_density / 4.0 * (3.0 - disc);
    out.spinodal_high = out.packing_density / 4.0 * (3.0 + disc);
    out.range_low = *out.spinodal_low;
    out.range_high = std::min(*out.spinodal_high, out.packing_density);
    return out;
}

}  // namespace mips::theory
