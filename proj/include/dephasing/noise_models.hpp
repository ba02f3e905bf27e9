#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace dephasing {

enum class NoiseKind {
  White,
  OrnsteinUhlenbeck,
  GaussianCutoffSpectrum,
  Brownian,
  IntegratedStationary,
  TabulatedCorrelation,
  OneOverF,
};

enum class Stationarity { Stationary, WideSenseGeneralized, NonStationary };

// Either a lag table (nodes are lags tau >= 0, values has one column) or a
// full grid C(t_i, t_j) on nodes t_i (values is square).
struct CorrelationTable {
  std::vector<double> nodes;
  Eigen::MatrixXd values;
  bool is_lag_table() const { return values.cols() == 1; }
};

// Parameter names by kind:
//   White                   chi0, omega_c          C = chi0*omega_c*delta(tau)
//   OrnsteinUhlenbeck       sigma2, omega_c        C = sigma2*exp(-omega_c|tau|)
//   GaussianCutoffSpectrum  alpha, s, omega_c      S = alpha|w|^s omega_c^(1-s) exp(-(w/omega_c)^2)
//   Brownian                chi0, omega_c          C = 2 chi0 omega_c^3 min(t1,t2)
//   IntegratedStationary    sigma2, omega_c        xi = int_0^t eta, eta Ornstein-Uhlenbeck
//   OneOverF                alpha, omega_ir, omega_c
//   TabulatedCorrelation    (optional omega_c, used only as the fit time scale)
struct NoiseModel {
  NoiseKind kind = NoiseKind::White;
  std::map<std::string, double> params;
  Stationarity stationarity = Stationarity::WideSenseGeneralized;
  std::shared_ptr<const CorrelationTable> table;

  double param(const std::string& name) const;
  double param_or(const std::string& name, double fallback) const;
  double omega_c() const { return param_or("omega_c", 1.0); }
  bool is_stationary() const { return stationarity != Stationarity::NonStationary; }
  bool has_spectrum() const;
  void validate() const;

  static NoiseModel white(double chi0, double omega_c);
  static NoiseModel ornstein_uhlenbeck(double sigma2, double omega_c);
  static NoiseModel gaussian_cutoff(double alpha, double s, double omega_c);
  static NoiseModel brownian(double chi0, double omega_c);
  static NoiseModel integrated_ou(double sigma2, double omega_c);
  static NoiseModel one_over_f(double alpha, double omega_ir, double omega_c);
  static NoiseModel tabulated_lag(std::vector<double> lags, std::vector<double> values);
  static NoiseModel tabulated_grid(std::vector<double> nodes, Eigen::MatrixXd values);
};

std::string to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& s);
std::string to_string(Stationarity s);
Stationarity stationarity_from_string(const std::string& s);

// chi(t) = chi0^n (omega_c t)^n. `amplitude` holds chi0^n.
struct DecayLaw {
  int n = 2;
  double amplitude = 1.0;
  double omega_c = 1.0;

  double chi0() const;
  double operator()(double t) const;
};

double correlation(const NoiseModel& m, double t1, double t2);
double correlation_lag(const NoiseModel& m, double tau);
double spectrum(const NoiseModel& m, double omega);

// Phi(tau) = int_0^|tau| (|tau|-u) C(u) du, so chi(t) = 2 Phi(t).
double lag_kernel(const NoiseModel& m, double tau);

// int_a^b ds int_c^d ds' C(s, s').
double rectangle_covariance(const NoiseModel& m, double a, double b, double c, double d);

double filter_free(double t, double omega);        // 4 sin^2(wt/2)/w^2
double filter_integrated(double t, double omega);  // |1-e^{iwt}+iwt|^2/w^4

double chi_time_domain(const NoiseModel& m, double t);
double chi_spectrum_domain(const NoiseModel& m, double t);
double chi_integrated_process(const NoiseModel& eta, double t);

DecayLaw fit_short_time_law(const NoiseModel& m, const std::vector<double>& t_grid);

// (1/4pi) int S(w) w^{2n} dw over the real line.
double spectral_moment(const NoiseModel& m, int n);
double gaussian_cutoff_moment(double alpha, double s, double omega_c, int n);

}  // namespace dephasing
