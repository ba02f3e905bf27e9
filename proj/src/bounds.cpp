#include "dephasing/bounds.hpp"

#include <cmath>
#include <numbers>

#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"

namespace dephasing {

void BoundQuery::validate() const {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "N must be at least 1");
  if (!(T > 0)) throw Error(ErrorKind::InvalidInput, "T must be positive");
  if (decay.n < 1) throw Error(ErrorKind::InvalidDecay, "decay exponent must be >= 1");
  if (!(decay.amplitude >= 0) || !(decay.omega_c > 0)) {
    throw Error(ErrorKind::InvalidDecay, "decay amplitude and omega_c must be positive");
  }
  const double v = variance();
  if (v < 0 || v > 0.25 * double(N) * double(N) * (1 + 1e-12)) {
    throw Error(ErrorKind::InvalidInput, "varJz outside [0, N^2/4]");
  }
}

double purification_qfi_bound(double varJz, double chi, double t) {
  if (chi < 0 || varJz < 0) throw Error(ErrorKind::InvalidInput, "chi and varJz must be >= 0");
  return 4 * t * t * varJz / (1 + 4 * chi * varJz);
}

double purification_total(const BoundQuery& q, double t) {
  return q.T / t * purification_qfi_bound(q.variance(), q.decay(t), t);
}

double g_factor(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDecay, "g(n) needs n >= 2");
  return n * std::pow(n - 1.0, -1.0 + 1.0 / n);
}

TimeOptimum optimal_time_and_bound(const BoundQuery& q) {
  q.validate();
  const int n = q.decay.n;
  const double c = q.decay.chi0() * q.decay.omega_c;
  const double M = 4 * q.variance();  // plays the role of N^2
  TimeOptimum r;
  if (n == 1) {
    if (q.t_max) {
      r.t_star = *q.t_max;
      r.F_tot = purification_total(q, *q.t_max);
    } else {
      r.t_star = kInfiniteTime;
      r.F_tot = q.T / c;
    }
  } else {
    const double nn = n;
    r.t_star = (1 / c) * std::pow(1 / (nn - 1), 1 / nn) * std::pow(M, -1 / nn);
    r.F_tot = (q.T / c) * std::pow(nn - 1, 1 - 1 / nn) / nn * std::pow(M, 1 - 1 / nn);
  }
  r.precision = 1 / std::sqrt(r.F_tot);
  return r;
}

double precision_lower_bound(const BoundQuery& q) {
  q.validate();
  const double c = q.decay.chi0() * q.decay.omega_c;
  if (q.decay.n == 1) return c / q.T;
  const double nn = q.decay.n;
  const double M = 4 * q.variance();
  return (c / q.T) * g_factor(q.decay.n) * std::pow(M, -(nn - 1) / nn);
}

double ghz_total(const BoundQuery& q, double t) {
  const double N2 = double(q.N) * double(q.N);
  return q.T * N2 * t * std::exp(-N2 * q.decay(t));
}

TimeOptimum ghz_optimal(const BoundQuery& q) {
  q.validate();
  TimeOptimum r;
  if (q.decay.amplitude == 0) {
    r.t_star = kInfiniteTime;
    r.F_tot = std::numeric_limits<double>::infinity();
    r.precision = 0;
    return r;
  }
  const double nn = q.decay.n;
  const double c = q.decay.chi0() * q.decay.omega_c;
  const double N = q.N;
  r.t_star = (1 / c) * std::pow(1 / nn, 1 / nn) * std::pow(N, -2 / nn);
  r.F_tot = (q.T / c) * std::exp(-1 / nn) * std::pow(nn, -1 / nn) * std::pow(N, 2 - 2 / nn);
  r.precision = std::sqrt(c / q.T) * std::exp(0.5 / nn) * std::pow(nn, 0.5 / nn) *
                std::pow(N, -(nn - 1) / nn);
  return r;
}

PurificationMoments purification_moments(double zeta, double varJz, double chi, double t,
                                         double meanJz) {
  if (!(chi > 0)) throw Error(ErrorKind::InvalidInput, "chi must be positive");
  PurificationMoments p;
  p.mean = t * (1 - zeta) * meanJz;
  p.second_moment =
      t * t * ((1 - zeta) * (1 - zeta) * (varJz + meanJz * meanJz) + zeta * zeta / (4 * chi));
  p.qfi = 4 * (p.second_moment - p.mean * p.mean);
  return p;
}

double optimal_zeta(double varJz, double chi) { return 4 * chi * varJz / (1 + 4 * chi * varJz); }

TimeOptimum maximize_total_qfi(const std::function<double(double)>& total, double t_lo,
                               double t_hi, double tol) {
  if (!(t_lo > 0) || !(t_hi > t_lo)) throw Error(ErrorKind::InvalidInput, "bad time bracket");
  TimeOptimum r;
  r.t_star = fit::maximize_log_time<double>(total, t_lo, t_hi, tol);
  r.F_tot = total(r.t_star);
  r.precision = 1 / std::sqrt(r.F_tot);
  return r;
}

}  // namespace dephasing
