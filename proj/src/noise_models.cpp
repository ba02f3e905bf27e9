#include "dephasing/noise_models.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>
#include <numbers>

#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"
#include "dephasing/quadrature.hpp"

namespace dephasing {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_gaussian_cutoff(const NoiseModel& m) {
  return m.kind == NoiseKind::GaussianCutoffSpectrum || m.kind == NoiseKind::OneOverF;
}

// x - 1 + e^{-x}, accurate for small x.
double ou_shape(double x) {
  if (x < 1e-2) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0 + x2 * x2 / 720.0 -
                 x2 * x2 * x / 5040.0);
  }
  return x + std::expm1(-x);
}

// int_0^x int_0^y min(s, s') ds ds'
double min_kernel(double x, double y) {
  const double a = std::min(x, y);
  const double b = std::max(x, y);
  return a * a * b / 2.0 - a * a * a / 6.0;
}

double integrated_ou_corr(double sigma2, double w, double t1, double t2) {
  const double a = std::min(t1, t2);
  const double b = std::max(t1, t2);
  const double bracket = -std::expm1(-w * a) - std::exp(-w * b) + std::exp(-w * (b - a));
  return sigma2 * (2.0 * a / w - bracket / (w * w));
}

double interp_lag(const CorrelationTable& tab, double tau) {
  tau = std::abs(tau);
  const auto& x = tab.nodes;
  if (tau > x.back() * (1 + 1e-12)) throw Error(ErrorKind::OutOfTable, "lag beyond table");
  if (tau < x.front()) throw Error(ErrorKind::OutOfTable, "lag below table");
  auto it = std::upper_bound(x.begin(), x.end(), tau);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1), x.size() - 1);
  const double w = (tau - x[i - 1]) / (x[i] - x[i - 1]);
  return (1 - w) * tab.values(i - 1, 0) + w * tab.values(i, 0);
}

double interp_grid(const CorrelationTable& tab, double t1, double t2) {
  const auto& x = tab.nodes;
  auto locate = [&](double t) {
    if (t < x.front() - 1e-12 * std::abs(x.front()) || t > x.back() * (1 + 1e-12)) {
      throw Error(ErrorKind::OutOfTable, "time outside tabulated grid");
    }
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i =
        std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1), x.size() - 1);
    return std::pair<std::size_t, double>(i - 1, std::clamp((t - x[i - 1]) / (x[i] - x[i - 1]), 0.0, 1.0));
  };
  auto [i, u] = locate(t1);
  auto [j, v] = locate(t2);
  const auto& C = tab.values;
  return (1 - u) * (1 - v) * C(i, j) + u * (1 - v) * C(i + 1, j) + (1 - u) * v * C(i, j + 1) +
         u * v * C(i + 1, j + 1);
}

// (1/pi) int_0^inf S(w) K(w) dw for an oscillating kernel with period 2pi/t.
// tail_avg(w) is the period-averaged integrand used beyond the explicit range.
double spectral_integral(const NoiseModel& m, const quad::Fn& kernel, double t,
                         const quad::Fn& tail_avg) {
  const double scale = has_gaussian_cutoff(m) || m.kind == NoiseKind::OrnsteinUhlenbeck
                           ? m.omega_c()
                           : 1.0 / t;
  const double P = 2 * kPi / t;
  double W = std::max(2000.0 * P, 64.0 * scale);
  bool tail = true;
  if (has_gaussian_cutoff(m)) {
    W = std::min(W, std::max(P, 9.0 * m.omega_c()));
    tail = false;
  }
  W = std::ceil(W / P) * P;
  std::vector<double> br{0.0};
  for (int j = -12; j <= 12; ++j) {
    const double w = scale * std::ldexp(1.0, j);
    if (w < W) br.push_back(w);
  }
  if (m.kind == NoiseKind::OneOverF) br.push_back(m.param("omega_ir"));
  const auto kmax = static_cast<long>(std::llround(W / P));
  for (long k = 1; k <= kmax; ++k) br.push_back(double(k) * P);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
           br.end());
  auto f = [&](double w) { return spectrum(m, w) * kernel(w); };
  double sum = quad::integrate_singular_left(f, br[0], br[1]);
  std::vector<double> rest(br.begin() + 1, br.end());
  sum += quad::integrate_pieces(f, rest, 1e-15, 1e-12);
  if (tail) {
    sum += quad::integrate_to_infinity([&](double w) { return spectrum(m, w) * tail_avg(w); }, W);
  }
  return sum / kPi;
}

void check_nonneg(double chi, double scale) {
  if (chi < -1e-10 * std::max(1.0, scale)) {
    throw Error(ErrorKind::NegativeResult, "chi(t) = " + std::to_string(chi));
  }
}

}  // namespace

double NoiseModel::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw Error(ErrorKind::InvalidInput, "missing parameter '" + name + "'");
  return it->second;
}

double NoiseModel::param_or(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

bool NoiseModel::has_spectrum() const {
  switch (kind) {
    case NoiseKind::White:
    case NoiseKind::OrnsteinUhlenbeck:
    case NoiseKind::GaussianCutoffSpectrum:
    case NoiseKind::OneOverF:
      return true;
    default:
      return false;
  }
}

void NoiseModel::validate() const {
  auto positive = [&](const char* p) {
    const double v = param(p);
    if (!(v > 0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidInput, std::string(p) + " must be positive");
    }
  };
  switch (kind) {
    case NoiseKind::White:
    case NoiseKind::Brownian:
      positive("chi0");
      positive("omega_c");
      break;
    case NoiseKind::OrnsteinUhlenbeck:
    case NoiseKind::IntegratedStationary:
      positive("sigma2");
      positive("omega_c");
      break;
    case NoiseKind::GaussianCutoffSpectrum:
      positive("alpha");
      positive("omega_c");
      if (!(param("s") > -1.0)) throw Error(ErrorKind::InvalidInput, "s must exceed -1");
      break;
    case NoiseKind::OneOverF:
      positive("alpha");
      positive("omega_ir");
      positive("omega_c");
      break;
    case NoiseKind::TabulatedCorrelation: {
      if (!table || table->nodes.size() < 2) {
        throw Error(ErrorKind::InvalidInput, "tabulated correlator needs at least two nodes");
      }
      if (!std::is_sorted(table->nodes.begin(), table->nodes.end()) ||
          std::adjacent_find(table->nodes.begin(), table->nodes.end()) != table->nodes.end()) {
        throw Error(ErrorKind::InvalidInput, "table nodes must be strictly increasing");
      }
      const auto n = static_cast<Eigen::Index>(table->nodes.size());
      if (table->values.rows() != n || (table->values.cols() != 1 && table->values.cols() != n)) {
        throw Error(ErrorKind::InvalidInput, "table shape mismatch");
      }
      if (table->is_lag_table() && table->nodes.front() != 0.0) {
        throw Error(ErrorKind::InvalidInput, "lag table must start at tau = 0");
      }
      break;
    }
  }
}

NoiseModel NoiseModel::white(double chi0, double omega_c) {
  return {NoiseKind::White, {{"chi0", chi0}, {"omega_c", omega_c}},
          Stationarity::WideSenseGeneralized, nullptr};
}
NoiseModel NoiseModel::ornstein_uhlenbeck(double sigma2, double omega_c) {
  return {NoiseKind::OrnsteinUhlenbeck, {{"sigma2", sigma2}, {"omega_c", omega_c}},
          Stationarity::Stationary, nullptr};
}
NoiseModel NoiseModel::gaussian_cutoff(double alpha, double s, double omega_c) {
  return {NoiseKind::GaussianCutoffSpectrum, {{"alpha", alpha}, {"s", s}, {"omega_c", omega_c}},
          Stationarity::Stationary, nullptr};
}
NoiseModel NoiseModel::brownian(double chi0, double omega_c) {
  return {NoiseKind::Brownian, {{"chi0", chi0}, {"omega_c", omega_c}},
          Stationarity::NonStationary, nullptr};
}
NoiseModel NoiseModel::integrated_ou(double sigma2, double omega_c) {
  return {NoiseKind::IntegratedStationary, {{"sigma2", sigma2}, {"omega_c", omega_c}},
          Stationarity::NonStationary, nullptr};
}
NoiseModel NoiseModel::one_over_f(double alpha, double omega_ir, double omega_c) {
  return {NoiseKind::OneOverF, {{"alpha", alpha}, {"omega_ir", omega_ir}, {"omega_c", omega_c}},
          Stationarity::Stationary, nullptr};
}
NoiseModel NoiseModel::tabulated_lag(std::vector<double> lags, std::vector<double> values) {
  auto tab = std::make_shared<CorrelationTable>();
  tab->nodes = std::move(lags);
  tab->values = Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
  NoiseModel m{NoiseKind::TabulatedCorrelation, {}, Stationarity::Stationary, tab};
  m.validate();
  return m;
}
NoiseModel NoiseModel::tabulated_grid(std::vector<double> nodes, Eigen::MatrixXd values) {
  auto tab = std::make_shared<CorrelationTable>();
  tab->nodes = std::move(nodes);
  tab->values = std::move(values);
  NoiseModel m{NoiseKind::TabulatedCorrelation, {}, Stationarity::NonStationary, tab};
  m.validate();
  return m;
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::White: return "White";
    case NoiseKind::OrnsteinUhlenbeck: return "OrnsteinUhlenbeck";
    case NoiseKind::GaussianCutoffSpectrum: return "GaussianCutoffSpectrum";
    case NoiseKind::Brownian: return "Brownian";
    case NoiseKind::IntegratedStationary: return "IntegratedStationary";
    case NoiseKind::TabulatedCorrelation: return "TabulatedCorrelation";
    case NoiseKind::OneOverF: return "OneOverF";
  }
  return "?";
}

NoiseKind noise_kind_from_string(const std::string& s) {
  for (auto k : {NoiseKind::White, NoiseKind::OrnsteinUhlenbeck, NoiseKind::GaussianCutoffSpectrum,
                 NoiseKind::Brownian, NoiseKind::IntegratedStationary,
                 NoiseKind::TabulatedCorrelation, NoiseKind::OneOverF}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::InvalidInput, "unknown noise kind '" + s + "'");
}

std::string to_string(Stationarity s) {
  switch (s) {
    case Stationarity::Stationary: return "Stationary";
    case Stationarity::WideSenseGeneralized: return "WideSenseGeneralized";
    case Stationarity::NonStationary: return "NonStationary";
  }
  return "?";
}

Stationarity stationarity_from_string(const std::string& s) {
  for (auto k : {Stationarity::Stationary, Stationarity::WideSenseGeneralized,
                 Stationarity::NonStationary}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::InvalidInput, "unknown stationarity '" + s + "'");
}

double DecayLaw::chi0() const { return std::pow(amplitude, 1.0 / n); }

double DecayLaw::operator()(double t) const { return amplitude * std::pow(omega_c * t, n); }

double spectrum(const NoiseModel& m, double w) {
  w = std::abs(w);
  switch (m.kind) {
    case NoiseKind::White:
      return m.param("chi0") * m.param("omega_c");
    case NoiseKind::OrnsteinUhlenbeck: {
      const double wc = m.param("omega_c");
      return 2.0 * m.param("sigma2") * wc / (wc * wc + w * w);
    }
    case NoiseKind::GaussianCutoffSpectrum: {
      const double wc = m.param("omega_c");
      const double s = m.param("s");
      const double x = w / wc;
      return m.param("alpha") * wc * std::pow(x, s) * std::exp(-x * x);
    }
    case NoiseKind::OneOverF: {
      const double wir = m.param("omega_ir");
      const double x = w / m.param("omega_c");
      return m.param("alpha") * wir / (wir + w) * std::exp(-x * x);
    }
    default:
      throw Error(ErrorKind::SpectrumUndefined, to_string(m.kind) + " has no stationary spectrum");
  }
}

double correlation_lag(const NoiseModel& m, double tau) {
  tau = std::abs(tau);
  switch (m.kind) {
    case NoiseKind::OrnsteinUhlenbeck:
      return m.param("sigma2") * std::exp(-m.param("omega_c") * tau);
    case NoiseKind::GaussianCutoffSpectrum: {
      const double wc = m.param("omega_c");
      const double g = 0.5 * (m.param("s") + 1.0);
      const double x = wc * tau;
      return m.param("alpha") * wc * wc * std::tgamma(g) / (2 * kPi) *
             boost::math::hypergeometric_1F1(g, 0.5, -0.25 * x * x);
    }
    case NoiseKind::OneOverF: {
      auto cosk = [tau](double w) { return std::cos(w * tau); };
      if (tau == 0.0) {
        return spectral_integral(m, [](double) { return 1.0; }, 1.0 / m.omega_c(),
                                 [](double) { return 0.0; });
      }
      return spectral_integral(m, cosk, tau, [](double) { return 0.0; });
    }
    case NoiseKind::TabulatedCorrelation:
      if (!m.table || !m.table->is_lag_table()) break;
      return interp_lag(*m.table, tau);
    case NoiseKind::White:
      throw Error(ErrorKind::InvalidInput, "white-noise correlator is a delta distribution");
    default:
      break;
  }
  throw Error(ErrorKind::InvalidInput, to_string(m.kind) + " is not stationary");
}

double correlation(const NoiseModel& m, double t1, double t2) {
  switch (m.kind) {
    case NoiseKind::Brownian: {
      const double wc = m.param("omega_c");
      return 2.0 * m.param("chi0") * wc * wc * wc * std::min(t1, t2);
    }
    case NoiseKind::IntegratedStationary:
      return integrated_ou_corr(m.param("sigma2"), m.param("omega_c"), t1, t2);
    case NoiseKind::TabulatedCorrelation:
      if (m.table && !m.table->is_lag_table()) return interp_grid(*m.table, t1, t2);
      return correlation_lag(m, t2 - t1);
    default:
      return correlation_lag(m, t2 - t1);
  }
}

double lag_kernel(const NoiseModel& m, double tau) {
  tau = std::abs(tau);
  if (tau == 0.0) return 0.0;
  switch (m.kind) {
    case NoiseKind::White:
      return 0.5 * m.param("chi0") * m.param("omega_c") * tau;
    case NoiseKind::OrnsteinUhlenbeck: {
      const double wc = m.param("omega_c");
      return m.param("sigma2") / (wc * wc) * ou_shape(wc * tau);
    }
    case NoiseKind::GaussianCutoffSpectrum:
    case NoiseKind::OneOverF:
    case NoiseKind::TabulatedCorrelation: {
      if (!m.is_stationary()) break;
      auto f = [&](double u) { return (tau - u) * correlation_lag(m, u); };
      std::vector<double> br{0.0};
      if (m.kind == NoiseKind::TabulatedCorrelation) {
        for (double x : m.table->nodes) {
          if (x > 0 && x < tau) br.push_back(x);
        }
      } else {
        const double wc = m.omega_c();
        for (double k = 1; k / wc < tau && k < 4096; k *= 2) br.push_back(k / wc);
      }
      br.push_back(tau);
      return quad::integrate_pieces(f, br, 1e-15, 1e-12);
    }
    default:
      break;
  }
  throw Error(ErrorKind::InvalidInput, to_string(m.kind) + " has no lag kernel");
}

double rectangle_covariance(const NoiseModel& m, double a, double b, double c, double d) {
  switch (m.kind) {
    case NoiseKind::Brownian: {
      const double wc = m.param("omega_c");
      const double k = 2.0 * m.param("chi0") * wc * wc * wc;
      return k * (min_kernel(b, d) - min_kernel(a, d) - min_kernel(b, c) + min_kernel(a, c));
    }
    case NoiseKind::IntegratedStationary:
      return quad::integrate_2d([&](double s, double sp) { return correlation(m, s, sp); }, a, b,
                                c, d, true);
    case NoiseKind::TabulatedCorrelation:
      if (!m.is_stationary()) {
        return quad::integrate_2d([&](double s, double sp) { return correlation(m, s, sp); }, a,
                                  b, c, d, true);
      }
      [[fallthrough]];
    default:
      return lag_kernel(m, b - c) - lag_kernel(m, a - c) - lag_kernel(m, b - d) +
             lag_kernel(m, a - d);
  }
}

double filter_free(double t, double w) {
  const double x = w * t;
  if (std::abs(x) < 1e-4) return t * t * (1.0 - x * x / 12.0);
  const double s = std::sin(0.5 * x);
  return 4.0 * s * s / (w * w);
}

double filter_integrated(double t, double w) {
  const double x = w * t;
  const double t4 = t * t * t * t;
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    const double a = 0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 40320.0;
    const double b = 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0;
    return t4 * (a * a + x2 * b * b);
  }
  const double re = 1.0 - std::cos(x);
  const double im = x - std::sin(x);
  return t4 * (re * re + im * im) / (x * x * x * x);
}

double chi_time_domain(const NoiseModel& m, double t) {
  if (t < 0) throw Error(ErrorKind::InvalidInput, "t must be nonnegative");
  if (t == 0) return 0.0;
  double chi = 0.0;
  switch (m.kind) {
    case NoiseKind::White:
      chi = m.param("chi0") * m.param("omega_c") * t;
      break;
    case NoiseKind::OrnsteinUhlenbeck: {
      const double wc = m.param("omega_c");
      chi = 2.0 * m.param("sigma2") / (wc * wc) * ou_shape(wc * t);
      break;
    }
    case NoiseKind::Brownian:
      chi = 2.0 / 3.0 * m.param("chi0") * std::pow(m.param("omega_c") * t, 3);
      break;
    case NoiseKind::IntegratedStationary:
    case NoiseKind::TabulatedCorrelation:
      if (!m.is_stationary()) {
        try {
          chi = rectangle_covariance(m, 0, t, 0, t);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::QuadratureFailure) throw;
          throw Error(ErrorKind::NonIntegrableCorrelation, e.what());
        }
        break;
      }
      [[fallthrough]];
    default:
      try {
        chi = 2.0 * lag_kernel(m, t);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::QuadratureFailure) throw;
        throw Error(ErrorKind::NonIntegrableCorrelation, e.what());
      }
  }
  check_nonneg(chi, chi);
  return std::max(chi, 0.0);
}

double chi_spectrum_domain(const NoiseModel& m, double t) {
  if (!m.has_spectrum()) {
    throw Error(ErrorKind::SpectrumUndefined, to_string(m.kind) + " has no stationary spectrum");
  }
  if (t < 0) throw Error(ErrorKind::InvalidInput, "t must be nonnegative");
  if (t == 0) return 0.0;
  const double chi = spectral_integral(
      m, [t](double w) { return filter_free(t, w); }, t, [](double w) { return 2.0 / (w * w); });
  check_nonneg(chi, chi);
  return std::max(chi, 0.0);
}

double chi_integrated_process(const NoiseModel& eta, double t) {
  if (t < 0) throw Error(ErrorKind::InvalidInput, "t must be nonnegative");
  if (t == 0) return 0.0;
  NoiseModel inner = eta;
  if (eta.kind == NoiseKind::Brownian) {
    // Brownian motion is integrated white noise of level 2 chi0 omega_c^3.
    const double wc = eta.param("omega_c");
    inner = NoiseModel::white(2.0 * eta.param("chi0") * wc * wc, wc);
  } else if (eta.kind == NoiseKind::IntegratedStationary) {
    inner = NoiseModel::ornstein_uhlenbeck(eta.param("sigma2"), eta.param("omega_c"));
  }
  if (!inner.has_spectrum()) {
    throw Error(ErrorKind::SpectrumUndefined, to_string(eta.kind) + " has no stationary spectrum");
  }
  const double chi = spectral_integral(
      inner, [t](double w) { return filter_integrated(t, w); }, t,
      [t](double w) { return (w * w * t * t + 1.5) / (w * w * w * w); });
  check_nonneg(chi, chi);
  return std::max(chi, 0.0);
}

DecayLaw fit_short_time_law(const NoiseModel& m, const std::vector<double>& t_grid) {
  if (t_grid.size() < 3) throw Error(ErrorKind::InvalidInput, "need at least three grid points");
  const double wc = m.omega_c();
  std::vector<double> lx, ly, x;
  for (double t : t_grid) {
    const double u = wc * t;
    if (u < 1e-4 * (1 - 1e-9) || u > 1e-2 * (1 + 1e-9)) {
      throw Error(ErrorKind::InvalidInput, "grid must satisfy omega_c t in [1e-4, 1e-2]");
    }
    const double chi = chi_time_domain(m, t);
    if (!(chi > 0)) throw Error(ErrorKind::InvalidInput, "chi(t) must be positive on the grid");
    x.push_back(u);
    lx.push_back(std::log(u));
    ly.push_back(std::log(chi));
  }
  const auto lf = fit::linear(lx, ly);
  const int n = static_cast<int>(std::lround(lf.slope));
  if (n < 1 || std::abs(lf.slope - n) > 0.1 || lf.rms_residual > 0.05) {
    throw Error(ErrorKind::FitAmbiguous, "fitted exponent " + std::to_string(lf.slope));
  }
  // Amplitude: intercept of chi/(omega_c t)^n against omega_c t.
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::exp(ly[i]) / std::pow(x[i], n);
  const auto af = fit::linear(x, r);
  return DecayLaw{n, af.intercept, wc};
}

double gaussian_cutoff_moment(double alpha, double s, double omega_c, int n) {
  const double g = 0.5 * (s + 1.0);
  return alpha * omega_c * omega_c / (4 * kPi) * std::pow(omega_c, 2 * n) * std::tgamma(n + g);
}

double spectral_moment(const NoiseModel& m, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "moment order must be nonnegative");
  if (!m.has_spectrum()) {
    throw Error(ErrorKind::SpectrumUndefined, to_string(m.kind) + " has no stationary spectrum");
  }
  if (m.kind == NoiseKind::White || (m.kind == NoiseKind::OrnsteinUhlenbeck && n >= 1)) {
    throw Error(ErrorKind::DivergentMoment,
                to_string(m.kind) + " spectrum has no moment of order " + std::to_string(2 * n));
  }
  auto f = [&](double w) {
    const double S = spectrum(m, w);
    return S == 0.0 ? 0.0 : S * std::pow(w, 2 * n);
  };
  const double wc = m.omega_c();
  std::vector<double> br{0.0};
  for (int j = -8; j <= 3; ++j) br.push_back(wc * std::ldexp(1.0, j));
  if (m.kind == NoiseKind::OneOverF) br.push_back(m.param("omega_ir"));
  std::sort(br.begin(), br.end());
  double sum = quad::integrate_singular_left(f, br[0], br[1]);
  std::vector<double> rest(br.begin() + 1, br.end());
  sum += quad::integrate_pieces(f, rest, 0.0, 1e-13);
  sum += quad::integrate_to_infinity(f, br.back(), 1e-14);
  return sum / (2 * kPi);
}

}  // namespace dephasing
