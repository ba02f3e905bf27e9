#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dephasing/bounds.hpp"
#include "dephasing/dicke.hpp"
#include "dephasing/noise_models.hpp"

namespace dephasing {

// Instantaneous collective rotation exp(-i angle axis.J). Opaque pulses carry
// only a tag and are never compressed.
struct Pulse {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double angle = 0.0;
  bool opaque = false;
  std::string tag;
};

struct PulseSequence {
  std::vector<double> fractions;  // strictly increasing in (0, 1)
  std::vector<Pulse> pulses;      // one per fraction
  double t = 1.0;

  int segments() const { return int(fractions.size()) + 1; }
  std::vector<double> boundaries() const;  // 0, a_1 t, ..., t
  Eigen::VectorXd durations() const;
  void validate() const;

  static PulseSequence free(double t) { return {{}, {}, t}; }
};

struct SegmentCovariance {
  Eigen::MatrixXd sigma;
  double t = 0.0;
};

struct Compression {
  Eigen::MatrixXd S;                    // rows = blocks, entries in {-1, 0, 1}
  std::vector<std::vector<int>> blocks;  // consecutive segment indices
  std::vector<int> signs;                // y_j per segment
  bool fallback = false;                 // identity used because of an opaque pulse

  int rows() const { return int(S.rows()); }
};

SegmentCovariance build_segment_covariance(const NoiseModel& model, const PulseSequence& seq);

// Toggling-frame generator direction of each segment (unit 3-vectors).
std::vector<Eigen::Vector3d> toggling_generators(const PulseSequence& seq);

// Throws UnsupportedPulse on opaque pulses when strict.
Compression detect_dp_blocks(const PulseSequence& seq, bool strict = false);
Compression identity_compression(int segments);

struct QuadraticForm {
  double value = 0.0;      // dt^T Sigma^{-1} dt
  double total = 0.0;      // (T/t) value for the supplied T
  double condition = 1.0;  // of the diagonally scaled covariance
};
QuadraticForm quadratic_form_bound(const SegmentCovariance& cov, const PulseSequence& seq,
                                   double T = 1.0, double max_condition = 1e13);

struct MonotonicityReport {
  double full = 0.0;
  double compressed = 0.0;
  double relative_violation = 0.0;  // max(0, compressed - full) / full
  double idempotence_error = 0.0;   // ||P^2 - P||_max
  double symmetry_error = 0.0;      // ||P - P^T||_max
  double spectrum_error = 0.0;      // max distance of eig(P) from {0, 1}
};
MonotonicityReport check_compression_monotonicity(const Eigen::MatrixXd& sigma,
                                                  const Eigen::MatrixXd& S,
                                                  const Eigen::VectorXd& dt);

// --- K_{Q'} -------------------------------------------------------------

// Closed form for the Gaussian-cutoff spectrum. K is dimensionless; omega_c
// only fixes the time scale and drops out.
double kq_hankel_gaussian(int Q_prime, double s, double alpha = 1.0, double omega_c = 1.0);

struct BruteForceK {
  double leibniz = 0.0;
  double determinant = 0.0;
};
// `moments` are the dimensionless spectral moments (1/4pi) int S w^{2k} dw / omega_c^{2k+2}
// for k = 0..Q'-1.
BruteForceK kq_bruteforce(int Q_prime, const std::vector<double>& moments, int cap = 10);

struct NumericK {
  double K = 0.0;
  std::vector<double> t_grid;
  std::vector<double> values;  // omega_c^2 dt^T Sigma^{-1} dt on the grid
  double spread = 0.0;         // |three-point - two-point| / K
};
// Short-time limit by Richardson extrapolation in t^2 on a ratio-2 grid.
// An empty t_grid selects {0.05, 0.025, 0.0125}/omega_c.
NumericK kq_numeric(const NoiseModel& model, const std::vector<double>& fractions,
                    std::vector<double> t_grid = {});

// omega_c^2 dt^T Sigma^{-1} dt at finite t, in extended precision.
double scaled_quadratic_form(const NoiseModel& model, const std::vector<double>& fractions,
                             double t);

struct NoGoBound {
  double t_star = kInfiniteTime;
  double precision_bound = 0.0;  // lower bound on Delta b^2
  double K = 0.0;
};
enum class ControlRegime { White, ColoredStationary };
NoGoBound controlled_nogo_bound(int N, double T, ControlRegime regime, const NoiseModel& model,
                                int Q_prime);
NoGoBound controlled_nogo_bound_from_K(int N, double T, double omega_c, double K);

// (T/t) min(N^2 t^2, dt^T Sigma(t)^{-1} dt) for fixed fractions.
double controlled_total_qfi(int N, double T, const NoiseModel& model,
                            const std::vector<double>& fractions, double t);

// --- Pulses, control fields, controlled mixtures -------------------------

CMatrix rotation_unitary(int N, const Eigen::Vector3d& axis, double angle);

struct ControlField {
  double t = 1.0;
  std::vector<Eigen::Vector3d> samples;  // u(t_l) on a uniform grid over [0, t]
};
PulseSequence continuous_to_pulsed(const ControlField& u, int Q_slices);

// Monte Carlo over Lambda ~ N(0, S Sigma S^T).
struct MixtureEstimate {
  DickeState state;
  double stderr_frobenius = 0.0;
};
MixtureEstimate simulate_controlled_mixture(const DickeState& rho0, const PulseSequence& seq,
                                            const SegmentCovariance& cov,
                                            const Compression& compression, double b,
                                            std::int64_t sample_count, std::uint64_t seed,
                                            std::int64_t budget = 50'000'000);

// Deterministic reference for the same mixture: closed form for a single
// block, tensor Gauss-Hermite quadrature otherwise (up to three blocks).
DickeState controlled_mixture_reference(const DickeState& rho0, const PulseSequence& seq,
                                        const SegmentCovariance& cov,
                                        const Compression& compression, double b,
                                        int gh_order = 40);

// exp(-dphi^T Sigma^{-1} dphi / 8) and the numerical integral of sqrt(N1 N2).
double gaussian_overlap(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& dphi);
double gaussian_overlap_numeric(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& dphi);

}  // namespace dephasing
