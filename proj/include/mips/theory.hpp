#pragma once

#include <optional>

#include "mips/errors.hpp"

namespace mips::theory {

// The scalar parameters every analytical quantity derives from: the
// self-propelled speed, the two diffusion coefficients, the robot radius,
// and the collision resolution time.
struct TheoryInputs {
    double speed = 0.0;         // v0
    double diff_trans = 0.0;    // Dt
    double diff_rot = 0.0;      // Dr
    double radius = 0.0;        // r
    double resolve_time = 0.0;  // tau_m, mean time a robot stays stalled in a collision
};

struct SpinodalResult {
    bool exists = false;  // true iff speed > sqrt(16 * Dt * Dr)
    std::optional<double> spinodal_low;
    std::optional<double> spinodal_high;
    double packing_density = 0.0;
    // Densities favoring spontaneous separation: [spinodal_low,
    // min(spinodal_high, packing_density)]. Present iff exists.
    std::optional<double> range_low;
    std::optional<double> range_high;
};

// Long-time effective diffusion coefficient v0^2 / (2 Dr) + Dt.
double effective_diffusion(const TheoryInputs& in);

// Dimensionless activity v0 / (2 r Dr): persistence length over body size.
double activity(const TheoryInputs& in);

// Expected time between collisions at local density lambda,
// [4 r (4/pi) v0 lambda]^-1. Infinite when lambda or v0 is zero.
double collision_time(const TheoryInputs& in, double lambda);

// Extrapolated density at which the linear speed law reaches zero,
// [4 r (4/pi) v0 tau_m]^-1. Throws on v0 = 0.
double packing_density(const TheoryInputs& in);

enum class SpeedForm {
    linear,  // v0 (1 - lambda / lambda*), valid for tau_m << tau_c
    exact,   // v0 (1 - tau_m / (tau_c + tau_m)), no approximation
};

// Average speed at local density lambda in [0, packing_density].
double speed_at_density(const TheoryInputs& in, double lambda, SpeedForm form = SpeedForm::linear);

// Free energy density f(lambda) = lambda (ln lambda - 1)
//   + integral_0^lambda (1/2) ln(v(s)^2 / Dr + 2 Dt) ds,
// with v the linear speed law. The integral is evaluated by adaptive
// quadrature to the given relative tolerance. Valid for 0 < lambda <=
// packing density (endpoint excluded when Dt = 0, where the integrand's
// log diverges).
double free_energy_density(const TheoryInputs& in, double lambda, double rel_tol = 1e-8);

// Analytic curvature f''(lambda) = 1/lambda + (v v' / Dr) / (v^2 / Dr + 2 Dt)
// with v' = -v0 / lambda*. Valid on (0, packing density).
double free_energy_second_derivative(const TheoryInputs& in, double lambda);

// Spinodal densities (lambda*/4)(3 +- sqrt(1 - 16 Dt Dr / v0^2)) and the
// density range favoring spontaneous separation. Throws on v0 = 0.
SpinodalResult spinodal_densities(const TheoryInputs& in);

}  // namespace mips::theory
