#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "dephasing/noise_models.hpp"

namespace dephasing {

struct BoundQuery {
  int N = 1;
  double T = 1.0;
  DecayLaw decay;
  std::optional<double> varJz;  // defaults to N^2/4
  std::optional<double> t_max;  // evaluate at this time when the optimum is at infinity

  double variance() const { return varJz ? *varJz : 0.25 * double(N) * double(N); }
  void validate() const;
};

struct TimeOptimum {
  double t_star = std::numeric_limits<double>::infinity();
  double F_tot = 0.0;
  double precision = 0.0;  // Delta b, i.e. F_tot^{-1/2}
};

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

double purification_qfi_bound(double varJz, double chi, double t);

// Total-time objective: (T/t) * purification bound.
double purification_total(const BoundQuery& q, double t);

TimeOptimum optimal_time_and_bound(const BoundQuery& q);
double precision_lower_bound(const BoundQuery& q);  // Delta b^2
double g_factor(int n);

double ghz_total(const BoundQuery& q, double t);
TimeOptimum ghz_optimal(const BoundQuery& q);

struct PurificationMoments {
  double mean = 0;
  double second_moment = 0;
  double qfi = 0;
};
PurificationMoments purification_moments(double zeta, double varJz, double chi, double t,
                                         double meanJz = 0.0);
double optimal_zeta(double varJz, double chi);

// Maximise (T/t) * qfi(t) for an arbitrary chi(t) by golden-section search
// on log t within [t_lo, t_hi].
TimeOptimum maximize_total_qfi(const std::function<double(double)>& total, double t_lo,
                               double t_hi, double tol = 1e-10);

}  // namespace dephasing
