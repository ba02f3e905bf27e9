#include "dephasing/dicke.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <string>

#include "dephasing/errors.hpp"

namespace dephasing {

namespace {

using cd = std::complex<double>;

struct JxBasis {
  Eigen::VectorXd eval;
  Eigen::MatrixXd evec;
};

// J_x eigenbasis per N, computed once.
const JxBasis& jx_basis(int N) {
  static std::mutex mu;
  static std::map<int, JxBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spin_jx(N));
  return cache.emplace(N, JxBasis{es.eigenvalues(), es.eigenvectors()}).first->second;
}

CVector css_x(int N) {
  CVector psi(N + 1);
  const double lgN = std::lgamma(N + 1.0);
  for (int i = 0; i <= N; ++i) {
    const double lb = lgN - std::lgamma(i + 1.0) - std::lgamma(N - i + 1.0);
    psi(i) = std::exp(0.5 * lb - 0.5 * N * std::log(2.0));
  }
  return psi;
}

}  // namespace

Eigen::MatrixXd spin_jz(int N) {
  Eigen::VectorXd d(N + 1);
  for (int i = 0; i <= N; ++i) d(i) = 0.5 * N - i;
  return d.asDiagonal();
}

Eigen::MatrixXd spin_jx(int N) {
  const double J = 0.5 * N;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 1; i <= N; ++i) {
    const double m = J - i;  // <m+1|J_+|m>
    const double v = 0.5 * std::sqrt(J * (J + 1) - m * (m + 1));
    X(i - 1, i) = v;
    X(i, i - 1) = v;
  }
  return X;
}

CMatrix spin_jy(int N) {
  const double J = 0.5 * N;
  CMatrix Y = CMatrix::Zero(N + 1, N + 1);
  for (int i = 1; i <= N; ++i) {
    const double m = J - i;
    const double v = 0.5 * std::sqrt(J * (J + 1) - m * (m + 1));
    Y(i - 1, i) = cd(0, -v);
    Y(i, i - 1) = cd(0, v);
  }
  return Y;
}

Eigen::MatrixXd parity_x(int N) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) P(i, N - i) = 1.0;
  return P;
}

CMatrix pure_state(const CVector& psi) { return psi * psi.adjoint(); }

double expectation(const CMatrix& rho, const CMatrix& O) { return (rho * O).trace().real(); }

double variance_jz(const DickeState& s) {
  double m1 = 0, m2 = 0;
  for (int i = 0; i <= s.N; ++i) {
    const double p = s.rho(i, i).real();
    m1 += p * s.m(i);
    m2 += p * s.m(i) * s.m(i);
  }
  return m2 - m1 * m1;
}

DickeState build_input(InputKind kind, int N, double mu, double beta, int N_max) {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "N must be at least 1");
  if (N > N_max) {
    throw Error(ErrorKind::DimensionTooLarge,
                "N = " + std::to_string(N) + " exceeds N_max = " + std::to_string(N_max));
  }
  DickeState s;
  s.N = N;
  switch (kind) {
    case InputKind::GHZ: {
      s.rho = CMatrix::Zero(N + 1, N + 1);
      s.rho(0, 0) = s.rho(0, N) = s.rho(N, 0) = s.rho(N, N) = 0.5;
      break;
    }
    case InputKind::CSS:
      s.rho = pure_state(css_x(N));
      break;
    case InputKind::OATS: {
      // In the J_z frame the twist is e^{-i mu J_z^2} and the rotation e^{+i beta J_x}.
      CVector psi = css_x(N);
      for (int i = 0; i <= N; ++i) {
        const double m = 0.5 * N - i;
        psi(i) *= std::polar(1.0, -mu * m * m);
      }
      if (beta != 0.0) {
        const auto& B = jx_basis(N);
        CVector c = B.evec.transpose().cast<cd>() * psi;
        for (int k = 0; k <= N; ++k) c(k) *= std::polar(1.0, beta * B.eval(k));
        psi = B.evec.cast<cd>() * c;
      }
      psi /= psi.norm();
      s.rho = pure_state(psi);
      break;
    }
  }
  return s;
}

DickeState evolve(const DickeState& rho0, double b, double chi, double t) {
  if (chi < 0) throw Error(ErrorKind::InvalidInput, "chi must be nonnegative");
  DickeState out = rho0;
  out.b = b;
  out.t = t;
  const int n = rho0.dim();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double k = double(j - i);  // m_i - m_j
      out.rho(i, j) = rho0.rho(i, j) * std::polar(std::exp(-0.5 * chi * k * k), -b * t * k);
    }
  }
  return out;
}

CMatrix drho_db(const DickeState& s) {
  CMatrix d(s.dim(), s.dim());
  for (int j = 0; j < s.dim(); ++j) {
    for (int i = 0; i < s.dim(); ++i) {
      d(i, j) = cd(0, -s.t * double(j - i)) * s.rho(i, j);
    }
  }
  return d;
}

EstimationResult qfi_and_sld(const CMatrix& rho, const CMatrix& drho, double eig_floor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const auto& lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-9) {
    throw Error(ErrorKind::NotAState, "eigenvalue " + std::to_string(lam.minCoeff()));
  }
  const CMatrix& V = es.eigenvectors();
  const CMatrix D = V.adjoint() * drho * V;
  const int n = int(rho.rows());
  CMatrix Lt = CMatrix::Zero(n, n);
  double F = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = std::max(lam(i), 0.0) + std::max(lam(j), 0.0);
      if (s <= eig_floor) continue;
      F += 2.0 * std::norm(D(i, j)) / s;
      Lt(i, j) = 2.0 * D(i, j) / s;
    }
  }
  EstimationResult r;
  r.qfi = std::max(F, 0.0);
  r.sld = V * Lt * V.adjoint();
  return r;
}

double moments_precision(const DickeState& rho0, double chi, double b0, double t, double T,
                         const CMatrix& O, double step) {
  if (t <= 0 || T <= 0) throw Error(ErrorKind::InvalidInput, "t and T must be positive");
  const double h = step > 0 ? step : 1e-6 / t;
  const double ep = expectation(evolve(rho0, b0 + h, chi, t).rho, O);
  const double em = expectation(evolve(rho0, b0 - h, chi, t).rho, O);
  const double slope = (ep - em) / (2 * h);
  const auto rho = evolve(rho0, b0, chi, t).rho;
  const double mean = expectation(rho, O);
  const double var = expectation(rho, O * O) - mean * mean;
  if (std::abs(slope) <= 1e-7 * t * std::max(1.0, O.norm())) {
    throw Error(ErrorKind::ZeroSlope, "observable carries no signal");
  }
  return t * std::max(var, 0.0) / (T * slope * slope);
}

DickeState random_state(int N, std::mt19937_64& rng, int rank) {
  const int n = N + 1;
  if (rank <= 0 || rank > n) rank = n;
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix G(n, rank);
  for (int j = 0; j < rank; ++j) {
    for (int i = 0; i < n; ++i) G(i, j) = cd(g(rng), g(rng));
  }
  DickeState s;
  s.N = N;
  s.rho = G * G.adjoint();
  s.rho /= s.rho.trace().real();
  return s;
}

}  // namespace dephasing
