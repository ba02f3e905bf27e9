#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dephasing/control.hpp"
#include "dephasing/dicke.hpp"
#include "dephasing/noise_models.hpp"

namespace dephasing {

// Rows are trajectories; columns are grid times (accumulated phase lambda(t_i))
// or segments (per-segment phase) depending on how the ensemble was drawn.
struct TrajectoryEnsemble {
  Eigen::MatrixXd samples;
  std::uint64_t seed = 0;
  std::vector<double> grid;

  int count() const { return int(samples.rows()); }
};

// Draws from N(0, K) with K_ij = int_0^{t_i} int_0^{t_j} C.
TrajectoryEnsemble sample_phase_process(const NoiseModel& model, const std::vector<double>& grid,
                                        int count, std::uint64_t seed);
// Same, with an explicit covariance (for example a segment covariance).
TrajectoryEnsemble sample_gaussian(const Eigen::MatrixXd& cov, const std::vector<double>& grid,
                                   int count, std::uint64_t seed);
TrajectoryEnsemble sample_segment_phases(const NoiseModel& model, const PulseSequence& seq,
                                         int count, std::uint64_t seed);

// Average of e^{-i(bt+lambda)J_z} rho0 e^{+i(bt+lambda)J_z} over the given column.
MixtureEstimate empirical_average_state(const DickeState& rho0, const TrajectoryEnsemble& ens,
                                        double b, double t, int column = 0);

// Pulsed trajectories without block compression; columns are segments of seq.
MixtureEstimate empirical_controlled_state(const DickeState& rho0, const PulseSequence& seq,
                                           const TrajectoryEnsemble& ens, double b);

struct VarianceEstimate {
  double value = 0.0;
  double stderr = 0.0;
};
VarianceEstimate empirical_variance(const TrajectoryEnsemble& ens, int column);
double empirical_covariance(const TrajectoryEnsemble& ens, int i, int j);

double fidelity(const CMatrix& rho, const CMatrix& sigma);

// 8 (1 - F(rho_{b - d/2}, rho_{b + d/2})) / d^2.
double fidelity_qfi(const std::function<CMatrix(double)>& rho_of_b, double b, double delta);

// Ornstein-Uhlenbeck paths by exact one-step updates, phase by the trapezoid rule.
std::vector<double> simulate_ou_phase(double sigma2, double omega_c, double t, int steps,
                                      int count, std::uint64_t seed);

void write_ensemble_csv(const TrajectoryEnsemble& ens, const std::string& path);

}  // namespace dephasing
