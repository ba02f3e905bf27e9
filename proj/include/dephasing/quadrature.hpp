#pragma once

#include <functional>
#include <vector>

namespace dephasing::quad {

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b]. Throws QuadratureFailure when the
// error estimate stays above max(abs_tol, rel_tol*|I|).
double integrate(const Fn& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-12);

// Same, summed over consecutive breakpoints.
double integrate_pieces(const Fn& f, const std::vector<double>& breaks, double abs_tol = 1e-13,
                        double rel_tol = 1e-12);

// Integrand with an integrable endpoint singularity at a.
double integrate_singular_left(const Fn& f, double a, double b, double tol = 1e-12);

// [a, inf) for non-oscillatory, decaying integrands.
double integrate_to_infinity(const Fn& f, double a, double tol = 1e-12);

// Nested 2-D integral over [a,b]x[c,d]; `kink` adds the diagonal s = s'
// as an inner breakpoint when it falls inside [c,d].
double integrate_2d(const std::function<double(double, double)>& f, double a, double b, double c,
                    double d, bool kink, double abs_tol = 1e-11);

}  // namespace dephasing::quad
