#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>

namespace dephasing {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Permutation-symmetric state of N qubits in the J_z eigenbasis.
// Row/column i corresponds to m = N/2 - i.
struct DickeState {
  int N = 1;
  CMatrix rho;
  double b = 0.0;
  double t = 0.0;

  double J() const { return 0.5 * N; }
  double m(int i) const { return 0.5 * N - i; }
  int dim() const { return N + 1; }
};

enum class InputKind { GHZ, CSS, OATS };

struct EstimationResult {
  double qfi = 0.0;
  CMatrix sld;
  std::optional<double> precision_variance;
};

inline constexpr int kDefaultNMax = 2048;
inline constexpr double kDefaultEigFloor = 1e-12;

// States are returned in the frame where the signal and the noise couple to
// J_z. OATS is the x-frame state e^{+i beta J_z} e^{-i mu J_x^2}|J,J> mapped
// by e^{-i(pi/2)J_y}.
DickeState build_input(InputKind kind, int N, double mu = 0.0, double beta = 0.0,
                       int N_max = kDefaultNMax);

DickeState evolve(const DickeState& rho0, double b, double chi, double t);
CMatrix drho_db(const DickeState& rho_b);
EstimationResult qfi_and_sld(const CMatrix& rho, const CMatrix& drho,
                             double eig_floor = kDefaultEigFloor);
inline EstimationResult qfi_and_sld(const DickeState& s, double eig_floor = kDefaultEigFloor) {
  return qfi_and_sld(s.rho, drho_db(s), eig_floor);
}

// t * Var(O) / (T * (d<O>/db)^2) with a central difference at b0 +- step.
// step <= 0 selects 1e-6 / t.
double moments_precision(const DickeState& rho0, double chi, double b0, double t, double T,
                         const CMatrix& O, double step = 0.0);

Eigen::MatrixXd spin_jz(int N);
Eigen::MatrixXd spin_jx(int N);
CMatrix spin_jy(int N);
// Product of sigma_x over all qubits restricted to the symmetric sector.
Eigen::MatrixXd parity_x(int N);

double expectation(const CMatrix& rho, const CMatrix& O);
double variance_jz(const DickeState& s);
CMatrix pure_state(const CVector& psi);

// Random mixed state of the given rank (rank <= 0 gives full rank).
DickeState random_state(int N, std::mt19937_64& rng, int rank = 0);

}  // namespace dephasing
