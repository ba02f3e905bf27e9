#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dephasing/bounds.hpp"
#include "dephasing/noise_models.hpp"

namespace dephasing {

// Quadratures x = (a + a^dag)/sqrt2, p = i(a^dag - a)/sqrt2; vacuum covariance I/2.
struct GaussianState {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
  double J = 0.5;
};

struct OatsParams {
  double delta = 1.0;
  double eta = 0.0;
};

OatsParams oats_params(double mu, double beta, double J);
GaussianState input_gaussian(double delta, double eta, double J);
GaussianState evolve_averaged(const GaussianState& s, double b, double t, double chi);

struct GaussianQfi {
  double qfi = 0;
  Eigen::Vector2d sld_coeffs = Eigen::Vector2d::Zero();  // L = c . (r - mean)
};
// d(mean)/db = (0, sqrt(J) t).
GaussianQfi gaussian_qfi(const GaussianState& s, double t);

// Closed form of gaussian_qfi for the averaged OATS family.
double oats_qfi(int N, double delta, double chi, double t);
double oats_total(int N, double T, const DecayLaw& decay, double delta, double t);

enum class HpStatus { Valid, Marginal, Invalid };
struct HpReport {
  double excitations = 0;
  double ratio = 0;  // <a^dag a> / 2J
  HpStatus status = HpStatus::Valid;
};
HpReport hp_validity(const GaussianState& s, double J, double eps = 0.1, double marginal = 1.0);
std::string to_string(HpStatus s);

struct OatsOptions {
  double hp_eps = 0.1;
  double hp_marginal = 1.0;
  bool check_hp = true;
};
TimeOptimum oats_optimal(int N, double T, const DecayLaw& decay, double mu, double beta,
                         const OatsOptions& opt = {});
TimeOptimum oats_optimal_delta(int N, double T, const DecayLaw& decay, double delta);

enum class Table1State { CSS, KU, PE, GHZ };
enum class NoiseRegime { ColoredN2, White, Noiseless };
std::string to_string(Table1State s);
std::string to_string(NoiseRegime r);

struct OatsAngles {
  double mu = 0;
  double beta = 0;
};
// Squeezing and rotation angles of the OATS rows (CSS is mu = beta = 0).
OatsAngles table1_angles(Table1State s, int N);

struct Table1Row {
  Table1State state;
  NoiseRegime regime;
  double fitted_exponent = 0;
  double fitted_prefactor = 0;  // Delta b(N_max) * N_max^{-model_exponent}
  double model_exponent = 0;    // asymptotic exponent of the closed forms
  double model_prefactor = 0;   // asymptotic coefficient of the closed forms
  double tabulated_exponent = 0;
  double tabulated_prefactor = 0;
  double residual = 0;
  std::vector<double> N;
  std::vector<double> precision;
};

// Optimised QCRB Delta b (units (chi0 omega_c/T)^{1/2}, or (T t)^{-1/2} noiseless).
double table1_precision(Table1State s, NoiseRegime r, int N, double T = 1.0);
Table1Row table1_row(Table1State s, NoiseRegime r, const std::vector<int>& N_list, double T = 1.0);
std::vector<int> table1_default_N();

}  // namespace dephasing
