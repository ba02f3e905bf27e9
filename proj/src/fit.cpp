#include "dephasing/fit.hpp"

#include <stdexcept>

#include "dephasing/errors.hpp"

namespace dephasing::fit {

LineFit weighted_linear(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "fit needs at least two matched points");
  }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorKind::FitAmbiguous, "degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += w[i] * r * r;
  }
  f.rms_residual = std::sqrt(ss / sw);
  return f;
}

LineFit linear(const std::vector<double>& x, const std::vector<double>& y) {
  return weighted_linear(x, y, std::vector<double>(x.size(), 1.0));
}

LineFit loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return linear(lx, ly);
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    v[i] = count == 1 ? lo : std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  if (count > 1) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

}  // namespace dephasing::fit
