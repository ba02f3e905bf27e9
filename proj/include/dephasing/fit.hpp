#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace dephasing::fit {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double rms_residual = 0;
};

// Least squares y = intercept + slope*x, optionally weighted.
LineFit linear(const std::vector<double>& x, const std::vector<double>& y);
LineFit weighted_linear(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w);

// Slope of log y against log x.
LineFit loglog(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> logspace(double lo, double hi, int count);

// Golden-section maximisation of f(exp(u)) over u in [log lo, log hi].
// The bracket is first narrowed on a coarse grid so that a single interior
// maximum is assumed only locally. Real may be a multiprecision type.
template <class Real>
Real maximize_log_time(const std::function<Real(Real)>& f, Real lo, Real hi, Real tol) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const int grid = 64;
  Real a = log(lo), b = log(hi);
  Real best_u = a;
  Real best = f(exp(a));
  for (int i = 1; i <= grid; ++i) {
    Real u = a + (b - a) * Real(i) / Real(grid);
    Real v = f(exp(u));
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  const Real step = (b - a) / Real(grid);
  Real l = best_u - step, r = best_u + step;
  if (l < a) l = a;
  if (r > b) r = b;
  const Real phi = (Real(3) - sqrt(Real(5))) / Real(2);
  Real x1 = l + phi * (r - l), x2 = r - phi * (r - l);
  Real f1 = f(exp(x1)), f2 = f(exp(x2));
  int guard = 0;
  while (r - l > tol && guard++ < 2000) {
    if (f1 < f2) {
      l = x1;
      x1 = x2;
      f1 = f2;
      x2 = r - phi * (r - l);
      f2 = f(exp(x2));
    } else {
      r = x2;
      x2 = x1;
      f2 = f1;
      x1 = l + phi * (r - l);
      f1 = f(exp(x1));
    }
  }
  return exp((l + r) / Real(2));
}

}  // namespace dephasing::fit
