#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "dephasing/control.hpp"
#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"

namespace dephasing {

namespace {

using mp = boost::multiprecision::cpp_bin_float_100;

bool has_analytic_kernel(const NoiseModel& m) {
  switch (m.kind) {
    case NoiseKind::White:
    case NoiseKind::OrnsteinUhlenbeck:
    case NoiseKind::GaussianCutoffSpectrum:
    case NoiseKind::OneOverF:
      return true;
    default:
      return false;
  }
}

// Phi(tau) = int_0^tau (tau - u) C(u) du evaluated in extended precision.
class KernelMp {
 public:
  explicit KernelMp(const NoiseModel& m) : m_(m) {
    if (!has_analytic_kernel(m)) {
      throw Error(ErrorKind::InvalidInput,
                  "extended-precision kernel unavailable for " + to_string(m.kind));
    }
  }

  mp operator()(mp tau) const {
    using boost::multiprecision::abs;
    using boost::multiprecision::exp;
    tau = abs(tau);
    if (tau == 0) return mp(0);
    switch (m_.kind) {
      case NoiseKind::White:
        return mp(m_.param("chi0")) * mp(m_.param("omega_c")) * tau / 2;
      case NoiseKind::OrnsteinUhlenbeck: {
        const mp w = m_.param("omega_c"), s2 = m_.param("sigma2");
        const mp x = w * tau;
        return s2 / (w * w) * (x - 1 + exp(-x));
      }
      default:
        return series(tau);
    }
  }

 private:
  // Raw moment int S w^{2k} dw / 2pi, which is the (-1)^k coefficient of C's Taylor series.
  mp moment(int k) const {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    mp v;
    if (m_.kind == NoiseKind::GaussianCutoffSpectrum) {
      const mp a = m_.param("alpha"), w = m_.param("omega_c");
      const mp g = (mp(m_.param("s")) + 1) / 2;
      v = a / (2 * boost::math::constants::pi<mp>()) * pow(w, 2 * k + 2) *
          boost::math::tgamma(mp(k) + g);
    } else {
      v = 2 * spectral_moment(m_, k);
    }
    cache_.emplace(k, v);
    return v;
  }

  mp series(const mp& tau) const {
    mp sum = 0, pw = tau * tau / 2;  // tau^{2k+2}/(2k+2)!
    for (int k = 0; k < 400; ++k) {
      const mp term = (k % 2 ? -1 : 1) * moment(k) * pw;
      sum += term;
      if (k > 2 && abs(term) < abs(sum) * mp(1e-90)) return sum;
      pw *= tau * tau / ((2 * k + 3) * (2 * k + 4));
    }
    throw Error(ErrorKind::QuadratureFailure, "kernel series did not converge");
  }

  const NoiseModel& m_;
  mutable std::map<int, mp> cache_;
};

mp solve_sum(std::vector<std::vector<mp>> A) {
  // 1^T A^{-1} 1 by Gaussian elimination with partial pivoting.
  const int n = int(A.size());
  std::vector<mp> b(n, mp(1));
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (abs(A[r][c]) > abs(A[p][c])) p = r;
    }
    if (A[p][c] == 0) throw Error(ErrorKind::SingularCovariance, "segment covariance is singular");
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const mp f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<mp> x(n);
  for (int r = n - 1; r >= 0; --r) {
    mp s = b[r];
    for (int k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
    x[r] = s / A[r][r];
  }
  mp total = 0;
  for (const auto& v : x) total += v;
  return total;
}

void check_fractions(const std::vector<double>& fractions) {
  double prev = 0.0;
  for (double a : fractions) {
    if (!(a > prev) || !(a < 1.0)) {
      throw Error(ErrorKind::InvalidInput, "fractions must be strictly increasing in (0, 1)");
    }
    prev = a;
  }
}

void check_moments(const NoiseModel& model, int Q_prime) {
  if (!model.is_stationary()) {
    throw Error(ErrorKind::InvalidInput, "K requires a stationary model");
  }
  if (model.kind == NoiseKind::White) {
    throw Error(ErrorKind::DivergentMoment, "white noise has no finite spectral moments");
  }
  if (model.kind == NoiseKind::OrnsteinUhlenbeck && Q_prime > 1) {
    throw Error(ErrorKind::DivergentMoment,
                "Ornstein-Uhlenbeck spectrum has no second moment; only Q' = 1 is defined");
  }
}

double determinant_ld(const std::vector<std::vector<long double>>& A) {
  const int n = int(A.size());
  if (n == 0) return 1.0;
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> M(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = A[i][j];
  }
  return double(M.partialPivLu().determinant());
}

// Leibniz sum restricted to permutations preserving index parity (other terms vanish).
long double leibniz(const std::vector<std::vector<long double>>& A) {
  const int n = int(A.size());
  if (n == 0) return 1.0L;
  std::vector<int> odd, even;
  for (int i = 0; i < n; ++i) (i % 2 ? odd : even).push_back(i);
  auto parity = [](const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) inv += p[i] > p[j];
    }
    return inv % 2 ? -1 : 1;
  };
  long double sum = 0.0L;
  std::vector<int> pe = even;
  do {
    std::vector<int> po = odd;
    do {
      long double prod = parity(pe) * parity(po);
      for (std::size_t k = 0; k < even.size(); ++k) prod *= A[even[k]][pe[k]];
      for (std::size_t k = 0; k < odd.size(); ++k) prod *= A[odd[k]][po[k]];
      sum += prod;
    } while (std::next_permutation(po.begin(), po.end()));
  } while (std::next_permutation(pe.begin(), pe.end()));
  return sum;
}

}  // namespace

double kq_hankel_gaussian(int Q_prime, double s, double alpha, double omega_c) {
  if (Q_prime < 1) throw Error(ErrorKind::InvalidInput, "Q' must be at least 1");
  if (!(s > -1) || !(alpha > 0) || !(omega_c > 0)) {
    throw Error(ErrorKind::InvalidInput, "need s > -1, alpha > 0, omega_c > 0");
  }
  const int n = (Q_prime + 1) / 2;
  const double g = 0.5 * (s + 1.0);
  const double A = alpha / (4 * std::numbers::pi);
  const double lg = std::lgamma(g + n) - std::lgamma(double(n)) - std::lgamma(g) - std::lgamma(g + 1);
  return std::exp(lg) / (2 * A);
}

BruteForceK kq_bruteforce(int Q_prime, const std::vector<double>& moments, int cap) {
  if (Q_prime < 1) throw Error(ErrorKind::InvalidInput, "Q' must be at least 1");
  if (Q_prime > cap) {
    throw Error(ErrorKind::CombinatorialOverflow,
                "Q' = " + std::to_string(Q_prime) + " exceeds the cap " + std::to_string(cap));
  }
  const int need = Q_prime;  // indices up to (2Q')/2 - 1
  if (int(moments.size()) < need) {
    throw Error(ErrorKind::InvalidInput, "need " + std::to_string(need) + " moments");
  }
  std::vector<std::vector<long double>> C(Q_prime, std::vector<long double>(Q_prime, 0.0L));
  for (int i = 1; i <= Q_prime; ++i) {
    for (int j = 1; j <= Q_prime; ++j) {
      if ((i + j) % 2) continue;
      const long double sign = ((i - j) / 2) % 2 ? -1.0L : 1.0L;
      const long double mu = 2.0L * moments[(i + j) / 2 - 1];
      C[i - 1][j - 1] = sign * mu / (std::tgamma((long double)(i + 1)) * std::tgamma((long double)(j + 1)));
    }
  }
  std::vector<std::vector<long double>> Ct(Q_prime - 1, std::vector<long double>(Q_prime - 1));
  for (int i = 1; i < Q_prime; ++i) {
    for (int j = 1; j < Q_prime; ++j) Ct[i - 1][j - 1] = C[i][j];
  }
  BruteForceK r;
  r.leibniz = double(leibniz(Ct) / leibniz(C));
  r.determinant = determinant_ld(Ct) / determinant_ld(C);
  return r;
}

double scaled_quadratic_form(const NoiseModel& model, const std::vector<double>& fractions,
                             double t) {
  check_fractions(fractions);
  if (!(t > 0)) throw Error(ErrorKind::InvalidInput, "t must be positive");
  const KernelMp phi(model);
  std::vector<mp> b{mp(0)};
  for (double a : fractions) b.push_back(mp(a) * t);
  b.push_back(mp(t));
  const int Q = int(b.size()) - 1;
  // Entries scaled by 1/(dt_i dt_j) so the right-hand side is the ones vector.
  std::vector<std::vector<mp>> A(Q, std::vector<mp>(Q));
  for (int i = 0; i < Q; ++i) {
    for (int j = i; j < Q; ++j) {
      const mp v = phi(b[i + 1] - b[j]) - phi(b[i] - b[j]) - phi(b[i + 1] - b[j + 1]) +
                   phi(b[i] - b[j + 1]);
      A[i][j] = A[j][i] = v / ((b[i + 1] - b[i]) * (b[j + 1] - b[j]));
    }
  }
  const mp wc = model.omega_c();
  return double(wc * wc * solve_sum(std::move(A)));
}

NumericK kq_numeric(const NoiseModel& model, const std::vector<double>& fractions,
                    std::vector<double> t_grid) {
  const int Q_prime = int(fractions.size()) + 1;
  check_moments(model, Q_prime);
  if (model.kind != NoiseKind::OrnsteinUhlenbeck) {
    for (int k = 0; k < Q_prime; ++k) spectral_moment(model, k);
  }
  const double wc = model.omega_c();
  if (t_grid.empty()) t_grid = {0.05 / wc, 0.025 / wc, 0.0125 / wc};
  if (t_grid.size() < 2) throw Error(ErrorKind::InvalidInput, "need at least two grid times");
  NumericK r;
  r.t_grid = t_grid;
  for (double t : t_grid) r.values.push_back(scaled_quadratic_form(model, fractions, t));
  // Neville extrapolation to h = t^2 = 0.
  auto neville = [&](std::size_t first) {
    std::vector<double> h, p;
    for (std::size_t i = first; i < t_grid.size(); ++i) {
      h.push_back(t_grid[i] * t_grid[i]);
      p.push_back(r.values[i]);
    }
    for (std::size_t k = 1; k < h.size(); ++k) {
      for (std::size_t i = 0; i + k < h.size(); ++i) {
        p[i] = (h[i] * p[i + 1] - h[i + k] * p[i]) / (h[i] - h[i + k]);
      }
    }
    return p[0];
  };
  r.K = neville(0);
  const double two = neville(t_grid.size() - 2);
  r.spread = t_grid.size() > 2 ? std::abs(r.K - two) / std::abs(r.K) : 0.0;
  if (!std::isfinite(r.K) || r.spread > 1e-2) {
    throw Error(ErrorKind::ExtrapolationUnstable,
                "Richardson spread " + std::to_string(r.spread) + " exceeds 1e-2");
  }
  return r;
}

NoGoBound controlled_nogo_bound_from_K(int N, double T, double omega_c, double K) {
  if (N < 1 || !(T > 0) || !(omega_c > 0) || !(K > 0)) {
    throw Error(ErrorKind::InvalidInput, "need N >= 1 and positive T, omega_c, K");
  }
  NoGoBound b;
  b.K = K;
  b.t_star = std::sqrt(K) / (omega_c * N);
  b.precision_bound = omega_c / (T * std::sqrt(K) * N);
  return b;
}

NoGoBound controlled_nogo_bound(int N, double T, ControlRegime regime, const NoiseModel& model,
                                int Q_prime) {
  if (N < 1 || !(T > 0)) throw Error(ErrorKind::InvalidInput, "need N >= 1 and T > 0");
  if (regime == ControlRegime::White) {
    if (model.kind != NoiseKind::White) {
      throw Error(ErrorKind::InvalidInput, "white regime needs a white-noise model");
    }
    NoGoBound b;
    b.precision_bound = model.param("chi0") * model.param("omega_c") / T;
    return b;
  }
  if (Q_prime < 1) throw Error(ErrorKind::InvalidInput, "Q' must be at least 1");
  double K = 0.0;
  if (model.kind == NoiseKind::GaussianCutoffSpectrum) {
    K = kq_hankel_gaussian(Q_prime, model.param("s"), model.param("alpha"), model.omega_c());
  } else {
    std::vector<double> fr;
    for (int j = 1; j < Q_prime; ++j) fr.push_back(double(j) / Q_prime);
    K = kq_numeric(model, fr).K;
  }
  return controlled_nogo_bound_from_K(N, T, model.omega_c(), K);
}

double controlled_total_qfi(int N, double T, const NoiseModel& model,
                            const std::vector<double>& fractions, double t) {
  if (N < 1 || !(T > 0) || !(t > 0)) {
    throw Error(ErrorKind::InvalidInput, "need N >= 1 and positive T, t");
  }
  double q;
  if (has_analytic_kernel(model)) {
    const double wc = model.omega_c();
    q = scaled_quadratic_form(model, fractions, t) / (wc * wc);
  } else {
    PulseSequence seq;
    seq.t = t;
    seq.fractions = fractions;
    seq.pulses.assign(fractions.size(), Pulse{});
    q = quadratic_form_bound(build_segment_covariance(model, seq), seq).value;
  }
  const double n2 = double(N) * N;
  return T / t * std::min(n2 * t * t, q);
}

}  // namespace dephasing
