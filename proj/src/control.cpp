#include "dephasing/control.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dephasing/errors.hpp"

namespace dephasing {

namespace {

using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;

M2 su2(const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  M2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  const M2 ns = n(0) * sx + n(1) * sy + n(2) * sz;
  return std::cos(0.5 * angle) * M2::Identity() - cd(0, std::sin(0.5 * angle)) * ns;
}

Eigen::Vector3d adjoint_vector(const M2& G) {
  M2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  return {0.5 * (G * sx).trace().real(), 0.5 * (G * sy).trace().real(),
          0.5 * (G * sz).trace().real()};
}

// Psd square-root factor L with L L^T = A.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * top) {
    throw Error(ErrorKind::CovarianceNotPSD,
                "min eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

// Cumulative pulse products on the Dicke sector: P[j] acts before segment j.
std::vector<CMatrix> pulse_products(int N, const PulseSequence& seq) {
  std::vector<CMatrix> P;
  P.push_back(CMatrix::Identity(N + 1, N + 1));
  for (const auto& p : seq.pulses) {
    if (p.opaque) throw Error(ErrorKind::UnsupportedPulse, "opaque pulse '" + p.tag + "'");
    P.push_back(rotation_unitary(N, p.axis, p.angle) * P.back());
  }
  return P;
}

struct BlockPlan {
  std::vector<CMatrix> frame;  // P_s for each block
  Eigen::VectorXd dt_eff;
  CMatrix final;
};

BlockPlan plan_blocks(int N, const PulseSequence& seq, const Compression& c) {
  const auto P = pulse_products(N, seq);
  const Eigen::VectorXd dt = seq.durations();
  BlockPlan plan;
  plan.dt_eff = c.S * dt;
  for (const auto& blk : c.blocks) plan.frame.push_back(P[blk.front()]);
  plan.final = P.back();
  return plan;
}

// U = P_final * prod_a P_a^dag exp(-i phi_a J_z) P_a, later blocks on the left.
CMatrix branch_unitary(const BlockPlan& plan, const Eigen::VectorXd& phi, int N) {
  CMatrix U = CMatrix::Identity(N + 1, N + 1);
  for (int a = 0; a < int(plan.frame.size()); ++a) {
    CMatrix D = plan.frame[a];
    for (int i = 0; i <= N; ++i) D.row(i) *= std::polar(1.0, -phi(a) * (0.5 * N - i));
    U = plan.frame[a].adjoint() * D * U;
  }
  return plan.final * U;
}

void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
  // Probabilists' Hermite nodes via Golub-Welsch.
  Eigen::MatrixXd Jm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) Jm(i, i - 1) = Jm(i - 1, i) = std::sqrt(double(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Jm);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = v * v;
  }
}

}  // namespace

std::vector<double> PulseSequence::boundaries() const {
  std::vector<double> b{0.0};
  for (double a : fractions) b.push_back(a * t);
  b.push_back(t);
  return b;
}

Eigen::VectorXd PulseSequence::durations() const {
  const auto b = boundaries();
  Eigen::VectorXd d(segments());
  for (int j = 0; j < segments(); ++j) d(j) = b[j + 1] - b[j];
  return d;
}

void PulseSequence::validate() const {
  if (!(t > 0)) throw Error(ErrorKind::InvalidInput, "sequence time must be positive");
  if (pulses.size() != fractions.size()) {
    throw Error(ErrorKind::InvalidInput, "need one pulse per fraction");
  }
  double prev = 0.0;
  for (double a : fractions) {
    if (!(a > prev) || !(a < 1.0)) {
      throw Error(ErrorKind::InvalidInput, "fractions must be strictly increasing in (0, 1)");
    }
    prev = a;
  }
  for (const auto& p : pulses) {
    if (!p.opaque && p.axis.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "zero pulse axis");
  }
}

SegmentCovariance build_segment_covariance(const NoiseModel& model, const PulseSequence& seq) {
  seq.validate();
  const int Q = seq.segments();
  const auto b = seq.boundaries();
  SegmentCovariance c;
  c.t = seq.t;
  c.sigma = Eigen::MatrixXd::Zero(Q, Q);
  if (model.kind == NoiseKind::White) {
    const double k = model.param("chi0") * model.param("omega_c");
    for (int j = 0; j < Q; ++j) c.sigma(j, j) = k * (b[j + 1] - b[j]);
    return c;
  }
  for (int i = 0; i < Q; ++i) {
    for (int j = i; j < Q; ++j) {
      const double v = (i == j && model.is_stationary())
                           ? chi_time_domain(model, b[i + 1] - b[i])
                           : rectangle_covariance(model, b[i], b[i + 1], b[j], b[j + 1]);
      c.sigma(i, j) = c.sigma(j, i) = v;
    }
  }
  return c;
}

std::vector<Eigen::Vector3d> toggling_generators(const PulseSequence& seq) {
  seq.validate();
  M2 sz;
  sz << 1, 0, 0, -1;
  M2 P = M2::Identity();
  std::vector<Eigen::Vector3d> g;
  g.push_back(adjoint_vector(P.adjoint() * sz * P));
  for (const auto& p : seq.pulses) {
    if (p.opaque) throw Error(ErrorKind::UnsupportedPulse, "opaque pulse '" + p.tag + "'");
    P = su2(p.axis, p.angle) * P;
    g.push_back(adjoint_vector(P.adjoint() * sz * P));
  }
  return g;
}

Compression identity_compression(int segments) {
  Compression c;
  c.S = Eigen::MatrixXd::Identity(segments, segments);
  for (int j = 0; j < segments; ++j) c.blocks.push_back({j});
  c.signs.assign(segments, 1);
  return c;
}

Compression detect_dp_blocks(const PulseSequence& seq, bool strict) {
  std::vector<Eigen::Vector3d> g;
  try {
    g = toggling_generators(seq);
  } catch (const Error& e) {
    if (strict || e.kind() != ErrorKind::UnsupportedPulse) throw;
    auto c = identity_compression(seq.segments());
    c.fallback = true;
    return c;
  }
  Compression c;
  const int Q = seq.segments();
  c.signs.assign(Q, 1);
  Eigen::Vector3d gB = g[0];
  c.blocks.push_back({0});
  for (int j = 1; j < Q; ++j) {
    const double d = g[j].dot(gB);
    if (std::abs(std::abs(d) - 1.0) < 1e-10) {
      c.blocks.back().push_back(j);
      c.signs[j] = d > 0 ? 1 : -1;
    } else {
      gB = g[j];
      c.blocks.push_back({j});
    }
  }
  c.S = Eigen::MatrixXd::Zero(int(c.blocks.size()), Q);
  for (int a = 0; a < int(c.blocks.size()); ++a) {
    for (int j : c.blocks[a]) c.S(a, j) = c.signs[j];
  }
  return c;
}

QuadraticForm quadratic_form_bound(const SegmentCovariance& cov, const PulseSequence& seq,
                                   double T, double max_condition) {
  const Eigen::VectorXd dt = seq.durations();
  if (cov.sigma.rows() != dt.size()) {
    throw Error(ErrorKind::InvalidInput, "covariance does not match the sequence");
  }
  // Scale by diag(1/dt): dt^T Sigma^{-1} dt = 1^T (D Sigma D)^{-1} 1.
  const Eigen::VectorXd d = dt.cwiseInverse();
  const Eigen::MatrixXd M = d.asDiagonal() * cov.sigma * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  QuadraticForm q;
  q.condition = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(q.condition <= max_condition)) {
    throw Error(ErrorKind::IllConditioned,
                "condition number " + std::to_string(q.condition) + "; use the scaled route");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(dt.size());
  q.value = one.dot(llt.solve(one));
  q.total = T / cov.t * q.value;
  return q;
}

MonotonicityReport check_compression_monotonicity(const Eigen::MatrixXd& sigma,
                                                  const Eigen::MatrixXd& S,
                                                  const Eigen::VectorXd& dt) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (lu.rank() < S.rows()) throw Error(ErrorKind::RankDeficient, "S lacks full row rank");
  MonotonicityReport r;
  Eigen::LLT<Eigen::MatrixXd> full(sigma);
  r.full = dt.dot(full.solve(dt));
  const Eigen::MatrixXd St = S * sigma * S.transpose();
  Eigen::LLT<Eigen::MatrixXd> comp(St);
  const Eigen::VectorXd sd = S * dt;
  r.compressed = sd.dot(comp.solve(sd));
  r.relative_violation = std::max(0.0, r.compressed - r.full) / r.full;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXd B = root * S.transpose();
  const Eigen::MatrixXd P = B * comp.solve(B.transpose());
  r.idempotence_error = (P * P - P).cwiseAbs().maxCoeff();
  r.symmetry_error = (P - P.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(0.5 * (P + P.transpose()));
  for (int i = 0; i < ep.eigenvalues().size(); ++i) {
    const double l = ep.eigenvalues()(i);
    r.spectrum_error = std::max(r.spectrum_error, std::min(std::abs(l), std::abs(l - 1.0)));
  }
  return r;
}

CMatrix rotation_unitary(int N, const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  const CMatrix H = n(0) * spin_jx(N).cast<cd>() + n(1) * spin_jy(N) + n(2) * spin_jz(N).cast<cd>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  Eigen::VectorXcd ph(N + 1);
  for (int i = 0; i <= N; ++i) ph(i) = std::polar(1.0, -angle * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

PulseSequence continuous_to_pulsed(const ControlField& u, int Q_slices) {
  if (Q_slices < 1 || u.samples.size() < 2) {
    throw Error(ErrorKind::InvalidInput, "need Q_slices >= 1 and at least two control samples");
  }
  PulseSequence seq;
  seq.t = u.t;
  const int M = int(u.samples.size());
  const double dt = u.t / Q_slices;
  for (int l = 0; l < Q_slices; ++l) {
    // Left-point sample, linearly interpolated from the uniform grid.
    const double x = double(l) / Q_slices * (M - 1);
    const int i = std::min(int(x), M - 2);
    const double w = x - i;
    const Eigen::Vector3d val = (1 - w) * u.samples[i] + w * u.samples[i + 1];
    const Eigen::Vector3d area = dt * val;
    if (area.norm() == 0.0) continue;
    seq.fractions.push_back((l + 0.5) / Q_slices);
    seq.pulses.push_back(Pulse{area.normalized(), area.norm(), false, {}});
  }
  return seq;
}

MixtureEstimate simulate_controlled_mixture(const DickeState& rho0, const PulseSequence& seq,
                                            const SegmentCovariance& cov,
                                            const Compression& compression, double b,
                                            std::int64_t sample_count, std::uint64_t seed,
                                            std::int64_t budget) {
  if (sample_count > budget) {
    throw Error(ErrorKind::SamplingBudgetExceeded, std::to_string(sample_count) + " samples");
  }
  if (sample_count < 1) throw Error(ErrorKind::InvalidInput, "need at least one sample");
  const int N = rho0.N;
  const auto plan = plan_blocks(N, seq, compression);
  const Eigen::MatrixXd St = compression.S * cov.sigma * compression.S.transpose();
  const Eigen::MatrixXd L = psd_factor(St);
  const int q = int(St.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = N + 1;
  CMatrix sum = CMatrix::Zero(n, n);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd z(q);
  for (std::int64_t s = 0; s < sample_count; ++s) {
    for (int a = 0; a < q; ++a) z(a) = g(rng);
    const Eigen::VectorXd phi = b * plan.dt_eff + L * z;
    const CMatrix U = branch_unitary(plan, phi, N);
    const CMatrix r = U * rho0.rho * U.adjoint();
    sum += r;
    sq += r.cwiseAbs2();
  }
  MixtureEstimate est;
  est.state = rho0;
  est.state.b = b;
  est.state.t = seq.t;
  const double cnt = double(sample_count);
  est.state.rho = sum / cnt;
  const Eigen::MatrixXd var = (sq / cnt - est.state.rho.cwiseAbs2()).cwiseMax(0.0);
  est.stderr_frobenius = std::sqrt(var.sum() / std::max(1.0, cnt - 1));
  return est;
}

DickeState controlled_mixture_reference(const DickeState& rho0, const PulseSequence& seq,
                                        const SegmentCovariance& cov,
                                        const Compression& compression, double b, int gh_order) {
  const int N = rho0.N;
  const auto plan = plan_blocks(N, seq, compression);
  const Eigen::MatrixXd St = compression.S * cov.sigma * compression.S.transpose();
  const int q = int(St.rows());
  DickeState out = rho0;
  out.b = b;
  out.t = seq.t;
  if (q == 1) {
    DickeState inner = rho0;
    inner.rho = plan.frame[0] * rho0.rho * plan.frame[0].adjoint();
    const double te = plan.dt_eff(0);
    // evolve() applies exp(-i b t k) with t = te, i.e. phase b * dt_eff.
    const auto d = evolve(inner, b, St(0, 0), te);
    const CMatrix W = plan.final * plan.frame[0].adjoint();
    out.rho = W * d.rho * W.adjoint();
    return out;
  }
  if (q > 3) throw Error(ErrorKind::InvalidInput, "reference quadrature supports up to 3 blocks");
  const Eigen::MatrixXd L = psd_factor(St);
  std::vector<double> x, w;
  gauss_hermite(gh_order, x, w);
  const int n = N + 1;
  CMatrix acc = CMatrix::Zero(n, n);
  std::vector<int> idx(q, 0);
  Eigen::VectorXd z(q);
  while (true) {
    double weight = 1.0;
    for (int a = 0; a < q; ++a) {
      z(a) = x[idx[a]];
      weight *= w[idx[a]];
    }
    const Eigen::VectorXd phi = b * plan.dt_eff + L * z;
    const CMatrix U = branch_unitary(plan, phi, N);
    acc += weight * (U * rho0.rho * U.adjoint());
    int a = 0;
    while (a < q && ++idx[a] == gh_order) idx[a++] = 0;
    if (a == q) break;
  }
  out.rho = acc;
  return out;
}

double gaussian_overlap(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& dphi) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  return std::exp(-dphi.dot(llt.solve(dphi)) / 8.0);
}

double gaussian_overlap_numeric(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& dphi) {
  const int d = int(sigma.rows());
  if (d < 1 || d > 3) throw Error(ErrorKind::InvalidInput, "numeric overlap supports 1..3 dims");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  // Whitened coordinates y = L^{-1} x; the means sit at +-a.
  const Eigen::VectorXd a = llt.matrixL().solve(0.5 * dphi);
  // Composite 10-point Gauss-Legendre on a box covering both means.
  static const double gx[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                               0.8650633666889845, 0.9739065285171717};
  static const double gw[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                               0.1494513491505806, 0.0666713443086881};
  std::vector<std::vector<std::pair<double, double>>> nodes(d);
  for (int k = 0; k < d; ++k) {
    const double lo = -std::abs(a(k)) - 10.0, hi = std::abs(a(k)) + 10.0;
    const int panels = int(std::ceil((hi - lo) / 0.5));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = lo + (p + 0.5) * h;
      for (int i = 0; i < 5; ++i) {
        nodes[k].push_back({c - 0.5 * h * gx[i], 0.5 * h * gw[i]});
        nodes[k].push_back({c + 0.5 * h * gx[i], 0.5 * h * gw[i]});
      }
    }
  }
  const double norm = std::pow(2 * std::numbers::pi, -0.5 * d);
  double sum = 0.0;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    double wgt = norm, e = 0.0;
    for (int k = 0; k < d; ++k) {
      const double y = nodes[k][idx[k]].first;
      wgt *= nodes[k][idx[k]].second;
      e += (y - a(k)) * (y - a(k)) + (y + a(k)) * (y + a(k));
    }
    sum += wgt * std::exp(-0.25 * e);
    int k = 0;
    while (k < d && ++idx[k] == nodes[k].size()) idx[k++] = 0;
    if (k == d) break;
  }
  return sum;
}

}  // namespace dephasing
