#include "dephasing/gaussian_phase_space.hpp"

#include <cmath>
#include <numbers>

#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"

namespace dephasing {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
}  // namespace

OatsParams oats_params(double mu, double beta, double J) {
  const double k = J * mu;
  if (!std::isfinite(k)) throw Error(ErrorKind::InvalidInput, "J*mu must be finite");
  const double sb = std::sin(beta);
  OatsParams p;
  p.delta = 1 + 4 * k * k * sb * sb - 2 * k * std::sin(2 * beta);
  if (p.delta <= 1e-12) {
    throw Error(ErrorKind::DegenerateSqueezing, "delta = " + std::to_string(p.delta));
  }
  p.eta = (k * k * std::sin(2 * beta) - k * std::cos(2 * beta)) / p.delta;
  return p;
}

GaussianState input_gaussian(double delta, double eta, double J) {
  if (!(delta > 0)) throw Error(ErrorKind::DegenerateSqueezing, "delta must be positive");
  GaussianState s;
  s.J = J;
  s.mean.setZero();
  s.cov << delta, -2 * eta * delta, -2 * eta * delta, 1 / delta + 4 * eta * eta * delta;
  s.cov *= 0.5;
  return s;
}

GaussianState evolve_averaged(const GaussianState& s, double b, double t, double chi) {
  if (chi < 0) throw Error(ErrorKind::InvalidInput, "chi must be nonnegative");
  GaussianState o = s;
  o.mean << 0.0, std::sqrt(s.J) * b * t;
  o.cov(1, 1) += s.J * chi;
  return o;
}

GaussianQfi gaussian_qfi(const GaussianState& s, double t) {
  const double det = s.cov.determinant();
  if (!(det > 1e-300) || s.cov(0, 0) <= 0) {
    throw Error(ErrorKind::SingularCovariance, "covariance not positive definite");
  }
  const Eigen::Vector2d dmu(0.0, std::sqrt(s.J) * t);
  GaussianQfi r;
  r.sld_coeffs = s.cov.ldlt().solve(dmu);
  r.qfi = dmu.dot(r.sld_coeffs);
  return r;
}

double oats_qfi(int N, double delta, double chi, double t) {
  const double a = double(N) * delta;
  return a * t * t / (1 + a * chi);
}

double oats_total(int N, double T, const DecayLaw& decay, double delta, double t) {
  return T / t * oats_qfi(N, delta, decay(t), t);
}

HpReport hp_validity(const GaussianState& s, double J, double eps, double marginal) {
  HpReport r;
  r.excitations =
      0.5 * (s.cov(0, 0) + s.cov(1, 1) - 1.0) + 0.5 * s.mean.squaredNorm();
  r.ratio = r.excitations / (2 * J);
  r.status = r.ratio <= eps ? HpStatus::Valid
                            : (r.ratio <= marginal ? HpStatus::Marginal : HpStatus::Invalid);
  return r;
}

std::string to_string(HpStatus s) {
  switch (s) {
    case HpStatus::Valid: return "valid";
    case HpStatus::Marginal: return "marginal";
    case HpStatus::Invalid: return "invalid";
  }
  return "?";
}

TimeOptimum oats_optimal_delta(int N, double T, const DecayLaw& decay, double delta) {
  if (decay.n < 1) throw Error(ErrorKind::InvalidDecay, "decay exponent must be >= 1");
  const double c = decay.chi0() * decay.omega_c;
  const double nn = decay.n;
  const double a = double(N) * delta;
  TimeOptimum r;
  if (decay.n == 1) {
    r.t_star = kInfiniteTime;
    r.F_tot = T / c;
  } else {
    r.t_star = (1 / c) * std::pow(1 / (nn - 1), 1 / nn) * std::pow(a, -1 / nn);
    r.F_tot = (T / c) * std::pow(nn - 1, (nn - 1) / nn) / nn * std::pow(a, (nn - 1) / nn);
  }
  r.precision = 1 / std::sqrt(r.F_tot);
  return r;
}

TimeOptimum oats_optimal(int N, double T, const DecayLaw& decay, double mu, double beta,
                         const OatsOptions& opt) {
  const double J = 0.5 * N;
  const auto p = oats_params(mu, beta, J);
  if (opt.check_hp) {
    const auto rep = hp_validity(input_gaussian(p.delta, p.eta, J), J, opt.hp_eps, opt.hp_marginal);
    if (rep.status == HpStatus::Invalid) {
      throw Error(ErrorKind::HPViolation,
                  "<a^dag a>/2J = " + std::to_string(rep.ratio) + " outside the HP regime");
    }
  }
  return oats_optimal_delta(N, T, decay, p.delta);
}

std::string to_string(Table1State s) {
  switch (s) {
    case Table1State::CSS: return "CSS";
    case Table1State::KU: return "KU-OATS";
    case Table1State::PE: return "PE-OATS";
    case Table1State::GHZ: return "GHZ";
  }
  return "?";
}

std::string to_string(NoiseRegime r) {
  switch (r) {
    case NoiseRegime::ColoredN2: return "colored_n2";
    case NoiseRegime::White: return "white";
    case NoiseRegime::Noiseless: return "noiseless";
  }
  return "?";
}

OatsAngles table1_angles(Table1State s, int N) {
  const double n = N;
  switch (s) {
    case Table1State::KU:
      return {std::pow(3.0, 1.0 / 6) * std::pow(n, -2.0 / 3),
              kPi / 2 - std::pow(3.0, -1.0 / 6) * std::pow(n, -1.0 / 3)};
    case Table1State::PE:
      return {1 / std::sqrt(n), -kPi / 2};
    default:
      return {0.0, 0.0};
  }
}

std::vector<int> table1_default_N() { return {100, 316, 1000, 3162, 10000}; }

double table1_precision(Table1State s, NoiseRegime r, int N, double T) {
  const DecayLaw colored{2, 1.0, 1.0};
  const DecayLaw white{1, 1.0, 1.0};
  if (s == Table1State::GHZ) {
    BoundQuery q;
    q.N = N;
    q.T = T;
    if (r == NoiseRegime::Noiseless) return 1.0 / N;
    q.decay = r == NoiseRegime::White ? white : colored;
    const auto guess = ghz_optimal(q);
    const auto opt = maximize_total_qfi([&](double t) { return ghz_total(q, t); },
                                        guess.t_star * 1e-3, guess.t_star * 1e3, 1e-12);
    return std::sqrt(1.0 / opt.F_tot);
  }
  const auto ang = table1_angles(s, N);
  const double delta = oats_params(ang.mu, ang.beta, 0.5 * N).delta;
  switch (r) {
    case NoiseRegime::Noiseless:
      return 1 / std::sqrt(double(N) * delta);
    case NoiseRegime::White:
      // (T/t) F(t) increases monotonically towards T/(chi0 omega_c).
      return std::sqrt(white.chi0() * white.omega_c / T);
    case NoiseRegime::ColoredN2: {
      const auto guess = oats_optimal_delta(N, T, colored, delta);
      const auto opt = maximize_total_qfi(
          [&](double t) { return oats_total(N, T, colored, delta, t); }, guess.t_star * 1e-3,
          guess.t_star * 1e3, 1e-12);
      return std::sqrt(1.0 / opt.F_tot);
    }
  }
  return 0.0;
}

namespace {

struct Reference {
  double model_exponent, model_prefactor, tabulated_exponent, tabulated_prefactor;
};

Reference reference(Table1State s, NoiseRegime r) {
  const double r2 = std::sqrt(2.0);
  switch (r) {
    case NoiseRegime::ColoredN2:
      switch (s) {
        case Table1State::CSS: return {-0.25, r2, -1.25, std::sqrt(6 * std::sqrt(3.0))};
        case Table1State::KU:
          return {-5.0 / 12, r2 * std::pow(3.0, -1.0 / 12), -5.0 / 12, r2 * std::pow(3.0, -1.0 / 12)};
        case Table1State::PE: return {-0.5, r2, -0.5, r2};
        case Table1State::GHZ:
          return {-0.5, std::pow(2 * kE, 0.25), -0.5, std::pow(2 * kE, 0.25)};
      }
      break;
    case NoiseRegime::White:
      if (s == Table1State::GHZ) return {0, std::sqrt(kE), 0, std::sqrt(kE)};
      return {0, 1, 0, 1};
    case NoiseRegime::Noiseless:
      switch (s) {
        case Table1State::CSS: return {-0.5, 1, -0.5, 1};
        case Table1State::KU: return {-5.0 / 6, std::pow(3.0, -1.0 / 6), -5.0 / 6, 1};
        case Table1State::PE: return {-1, 1, -1, std::sqrt(kE)};
        case Table1State::GHZ: return {-1, 1, -1, 1};
      }
      break;
  }
  return {0, 0, 0, 0};
}

}  // namespace

Table1Row table1_row(Table1State s, NoiseRegime r, const std::vector<int>& N_list, double T) {
  if (N_list.size() < 2) throw Error(ErrorKind::InvalidInput, "need at least two N values");
  Table1Row row;
  row.state = s;
  row.regime = r;
  const auto ref = reference(s, r);
  row.model_exponent = ref.model_exponent;
  row.model_prefactor = ref.model_prefactor;
  row.tabulated_exponent = ref.tabulated_exponent;
  row.tabulated_prefactor = ref.tabulated_prefactor;
  std::vector<double> lx, ly, w;
  for (int N : N_list) {
    const double p = table1_precision(s, r, N, T);
    row.N.push_back(N);
    row.precision.push_back(p);
    lx.push_back(std::log(double(N)));
    ly.push_back(std::log(p));
    w.push_back(std::log10(double(N)));
  }
  const auto f = fit::weighted_linear(lx, ly, w);
  row.fitted_exponent = f.slope;
  row.residual = f.rms_residual;
  if (row.residual > 0.05) {
    throw Error(ErrorKind::FitAmbiguous, "log-log residual " + std::to_string(row.residual));
  }
  const double Nmax = row.N.back();
  row.fitted_prefactor = row.precision.back() * std::pow(Nmax, -row.model_exponent);
  return row;
}

}  // namespace dephasing
