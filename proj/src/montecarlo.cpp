#include "dephasing/montecarlo.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <random>

#include "dephasing/errors.hpp"

namespace dephasing {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXd psd_root(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double top = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * top) {
    throw Error(ErrorKind::CovarianceNotPSD,
                "min eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void check_state(const CMatrix& r) {
  if (r.rows() != r.cols()) throw Error(ErrorKind::NotAState, "matrix is not square");
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorKind::NotAState, "matrix is not Hermitian");
  }
  if (std::abs(r.trace().real() - 1.0) > 1e-8) throw Error(ErrorKind::NotAState, "trace is not 1");
}

// Eigenvalues below a relative floor are treated as exact zeros; otherwise
// round-off at 1e-17 would contribute sqrt(1e-17) terms to the fidelity.
CMatrix herm_sqrt(const CMatrix& r) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw Error(ErrorKind::NotAState, "negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  const double floor = 1e-13 * es.eigenvalues().maxCoeff();
  const Eigen::VectorXd root =
      es.eigenvalues().unaryExpr([&](double l) { return l > floor ? std::sqrt(l) : 0.0; });
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

MixtureEstimate finish(const DickeState& rho0, const CMatrix& sum, const Eigen::MatrixXd& sq,
                       double count, double b, double t) {
  MixtureEstimate est;
  est.state = rho0;
  est.state.b = b;
  est.state.t = t;
  if (count == 0) return est;
  est.state.rho = sum / count;
  const Eigen::MatrixXd var = (sq / count - est.state.rho.cwiseAbs2()).cwiseMax(0.0);
  est.stderr_frobenius = std::sqrt(var.sum() / std::max(1.0, count - 1));
  return est;
}

}  // namespace

TrajectoryEnsemble sample_gaussian(const Eigen::MatrixXd& cov, const std::vector<double>& grid,
                                   int count, std::uint64_t seed) {
  if (count < 0) throw Error(ErrorKind::InvalidInput, "count must be nonnegative");
  TrajectoryEnsemble e;
  e.seed = seed;
  e.grid = grid;
  const int d = int(cov.rows());
  e.samples = Eigen::MatrixXd::Zero(count, d);
  if (count == 0) return e;
  const Eigen::MatrixXd L = psd_root(cov);
  std::seed_seq ss{seed};
  std::mt19937_64 rng(ss);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd z(d);
  for (int s = 0; s < count; ++s) {
    for (int k = 0; k < d; ++k) z(k) = g(rng);
    e.samples.row(s) = (L * z).transpose();
  }
  return e;
}

TrajectoryEnsemble sample_phase_process(const NoiseModel& model, const std::vector<double>& grid,
                                        int count, std::uint64_t seed) {
  const int d = int(grid.size());
  Eigen::MatrixXd K(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      double v;
      if (model.kind == NoiseKind::White) {
        v = model.param("chi0") * model.param("omega_c") * std::min(grid[i], grid[j]);
      } else if (i == j) {
        v = chi_time_domain(model, grid[i]);
      } else {
        v = rectangle_covariance(model, 0.0, grid[i], 0.0, grid[j]);
      }
      K(i, j) = K(j, i) = v;
    }
  }
  return sample_gaussian(K, grid, count, seed);
}

TrajectoryEnsemble sample_segment_phases(const NoiseModel& model, const PulseSequence& seq,
                                         int count, std::uint64_t seed) {
  const auto cov = build_segment_covariance(model, seq);
  std::vector<double> idx;
  for (int j = 0; j < seq.segments(); ++j) idx.push_back(j);
  return sample_gaussian(cov.sigma, idx, count, seed);
}

MixtureEstimate empirical_average_state(const DickeState& rho0, const TrajectoryEnsemble& ens,
                                        double b, double t, int column) {
  const int n = rho0.dim();
  CMatrix sum = CMatrix::Zero(n, n);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXcd ph(n);
  for (int s = 0; s < ens.count(); ++s) {
    const double phi = b * t + ens.samples(s, column);
    for (int i = 0; i < n; ++i) ph(i) = std::polar(1.0, -phi * rho0.m(i));
    const CMatrix r = ph.asDiagonal() * rho0.rho * ph.conjugate().asDiagonal();
    sum += r;
    sq += r.cwiseAbs2();
  }
  return finish(rho0, sum, sq, ens.count(), b, t);
}

MixtureEstimate empirical_controlled_state(const DickeState& rho0, const PulseSequence& seq,
                                           const TrajectoryEnsemble& ens, double b) {
  const int N = rho0.N, n = N + 1;
  if (ens.samples.cols() != seq.segments()) {
    throw Error(ErrorKind::InvalidInput, "ensemble columns must match the segments");
  }
  std::vector<CMatrix> R;
  for (const auto& p : seq.pulses) R.push_back(rotation_unitary(N, p.axis, p.angle));
  const Eigen::VectorXd dt = seq.durations();
  CMatrix sum = CMatrix::Zero(n, n);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < ens.count(); ++s) {
    // Lab-frame product: free evolution, then pulse, segment by segment.
    CMatrix U = CMatrix::Identity(n, n);
    for (int j = 0; j < seq.segments(); ++j) {
      const double phi = b * dt(j) + ens.samples(s, j);
      for (int i = 0; i < n; ++i) U.row(i) *= std::polar(1.0, -phi * rho0.m(i));
      if (j < int(R.size())) U = R[j] * U;
    }
    const CMatrix r = U * rho0.rho * U.adjoint();
    sum += r;
    sq += r.cwiseAbs2();
  }
  return finish(rho0, sum, sq, ens.count(), b, seq.t);
}

VarianceEstimate empirical_variance(const TrajectoryEnsemble& ens, int column) {
  const int n = ens.count();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "need at least two samples");
  const Eigen::VectorXd x = ens.samples.col(column);
  const double mean = x.mean();
  VarianceEstimate v;
  v.value = (x.array() - mean).square().sum() / (n - 1);
  // Gaussian sample variance: sd = var * sqrt(2 / (n - 1)).
  v.stderr = v.value * std::sqrt(2.0 / (n - 1));
  return v;
}

double empirical_covariance(const TrajectoryEnsemble& ens, int i, int j) {
  const int n = ens.count();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "need at least two samples");
  const Eigen::ArrayXd a = ens.samples.col(i).array() - ens.samples.col(i).mean();
  const Eigen::ArrayXd c = ens.samples.col(j).array() - ens.samples.col(j).mean();
  return (a * c).sum() / (n - 1);
}

double fidelity(const CMatrix& rho, const CMatrix& sigma) {
  check_state(rho);
  check_state(sigma);
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) is the trace norm of sqrt(rho) sqrt(sigma).
  const CMatrix prod = herm_sqrt(rho) * herm_sqrt(sigma);
  return Eigen::JacobiSVD<CMatrix>(prod).singularValues().sum();
}

double fidelity_qfi(const std::function<CMatrix(double)>& rho_of_b, double b, double delta) {
  if (!(delta > 0)) throw Error(ErrorKind::InvalidInput, "delta must be positive");
  const double F = fidelity(rho_of_b(b - 0.5 * delta), rho_of_b(b + 0.5 * delta));
  return 8.0 * (1.0 - F) / (delta * delta);
}

std::vector<double> simulate_ou_phase(double sigma2, double omega_c, double t, int steps,
                                      int count, std::uint64_t seed) {
  if (steps < 1 || count < 0 || !(t > 0)) throw Error(ErrorKind::InvalidInput, "bad OU path request");
  std::seed_seq ss{seed};
  std::mt19937_64 rng(ss);
  std::normal_distribution<double> g(0.0, 1.0);
  const double h = t / steps;
  const double a = std::exp(-omega_c * h);
  const double kick = std::sqrt(sigma2 * (1.0 - a * a));
  std::vector<double> out(count);
  for (int s = 0; s < count; ++s) {
    double eta = std::sqrt(sigma2) * g(rng);
    double lam = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double next = a * eta + kick * g(rng);
      lam += 0.5 * h * (eta + next);
      eta = next;
    }
    out[s] = lam;
  }
  return out;
}

void write_ensemble_csv(const TrajectoryEnsemble& ens, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  f << "# seed=" << ens.seed << " count=" << ens.count() << "\n";
  f << std::setprecision(17);
  for (std::size_t j = 0; j < ens.grid.size(); ++j) f << (j ? "," : "") << "g" << ens.grid[j];
  f << "\n";
  for (int s = 0; s < ens.count(); ++s) {
    for (int j = 0; j < ens.samples.cols(); ++j) f << (j ? "," : "") << ens.samples(s, j);
    f << "\n";
  }
}

}  // namespace dephasing
