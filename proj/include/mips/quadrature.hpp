#pragma once

#include <functional>

namespace mips::quad {

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
// Subdivides until the local Kronrod-Gauss discrepancy meets the tolerance
// budget; rel_tol near 1e-15 bottoms out at the roundoff floor, which the
// depth cap turns into a clean return instead of runaway recursion.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0);

}  // namespace mips::quad
