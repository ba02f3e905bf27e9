#include "dephasing/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "dephasing/errors.hpp"

namespace dephasing::quad {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double gk_recursive(const Fn& f, double a, double b, double abs_tol, double rel_tol, int depth) {
  double err = 0.0;
  double l1 = 0.0;
  double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  // With max_depth 0 the error comes back in [-1, 1] units while L1 is scaled.
  err *= 0.5 * std::abs(b - a);
  if (!std::isfinite(v)) throw Error(ErrorKind::QuadratureFailure, "non-finite integrand");
  if (err <= std::max(abs_tol, rel_tol * std::abs(v)) || err <= 1e-15 * l1) return v;
  if (depth >= 40) {
    throw Error(ErrorKind::QuadratureFailure,
                "no convergence on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  const double m = 0.5 * (a + b);
  return gk_recursive(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1) +
         gk_recursive(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace

double integrate(const Fn& f, double a, double b, double abs_tol, double rel_tol) {
  if (a == b) return 0.0;
  return gk_recursive(f, a, b, abs_tol, rel_tol, 0);
}

double integrate_pieces(const Fn& f, const std::vector<double>& breaks, double abs_tol,
                        double rel_tol) {
  double s = 0.0;
  const double per = breaks.size() > 1 ? abs_tol / double(breaks.size() - 1) : abs_tol;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    s += integrate(f, breaks[i], breaks[i + 1], per, rel_tol);
  }
  return s;
}

double integrate_singular_left(const Fn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0;
  double l1 = 0.0;
  double v;
  try {
    v = ts.integrate(f, a, b, tol, &err, &l1);
  } catch (const std::domain_error& e) {
    throw Error(ErrorKind::QuadratureFailure, e.what());
  }
  if (std::isfinite(v) && err <= std::max(1e-10 * std::abs(v), 1e-13)) return v;
  // Gauss-Kronrod nodes avoid the endpoints, so an integrable endpoint singularity is safe.
  return gk_recursive(f, a, b, 1e-15, 1e-11, 0);
}

double integrate_to_infinity(const Fn& f, double a, double tol) {
  boost::math::quadrature::exp_sinh<double> es;
  double err = 0.0;
  double l1 = 0.0;
  double v;
  try {
    v = es.integrate([&](double u) { return f(a + u); }, tol, &err, &l1);
  } catch (const std::domain_error& e) {
    throw Error(ErrorKind::QuadratureFailure, e.what());
  }
  if (!std::isfinite(v) || err > std::max(1e-9 * std::abs(v), 1e-14)) {
    throw Error(ErrorKind::DivergentIntegral, "tail integral did not converge");
  }
  return v;
}

double integrate_2d(const std::function<double(double, double)>& f, double a, double b, double c,
                    double d, bool kink, double abs_tol) {
  const double area = std::abs((b - a) * (d - c));
  if (area == 0.0) return 0.0;
  auto inner = [&](double s) {
    auto g = [&](double sp) { return f(s, sp); };
    if (kink && s > c && s < d) {
      return integrate(g, c, s, abs_tol, 1e-12) + integrate(g, s, d, abs_tol, 1e-12);
    }
    return integrate(g, c, d, abs_tol, 1e-12);
  };
  if (kink) {
    // The inner result is only piecewise smooth in s at the corners of the overlap.
    std::vector<double> br{a};
    for (double x : {c, d}) {
      if (x > a && x < b) br.push_back(x);
    }
    br.push_back(b);
    std::sort(br.begin(), br.end());
    return integrate_pieces(inner, br, abs_tol, 1e-11);
  }
  return integrate(inner, a, b, abs_tol, 1e-11);
}

}  // namespace dephasing::quad
