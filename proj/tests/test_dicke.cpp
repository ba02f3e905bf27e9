#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dephasing/dicke.hpp"
#include "dephasing/errors.hpp"

using namespace dephasing;

TEST_CASE("GHZ QFI under collective dephasing") {
  for (int N : {1, 2, 5, 12}) {
    for (double chi : {0.0, 0.01, 0.2}) {
      const double t = 0.7;
      const auto s = evolve(build_input(InputKind::GHZ, N), 0.4, chi, t);
      CHECK(qfi_and_sld(s).qfi == doctest::Approx(N * N * t * t * std::exp(-N * N * chi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("CSS QFI without noise is N t^2") {
  for (int N : {1, 3, 20, 101}) {
    const auto s = evolve(build_input(InputKind::CSS, N), 0.1, 0.0, 1.5);
    CHECK(qfi_and_sld(s).qfi == doctest::Approx(N * 2.25).epsilon(1e-9));
  }
}

TEST_CASE("angular momentum algebra") {
  const int N = 7;
  const CMatrix jx = spin_jx(N).cast<std::complex<double>>();
  const CMatrix jy = spin_jy(N);
  const CMatrix jz = spin_jz(N).cast<std::complex<double>>();
  const CMatrix comm = jx * jy - jy * jx;
  CHECK((comm - std::complex<double>(0, 1) * jz).norm() < 1e-12);
  const CMatrix casimir = jx * jx + jy * jy + jz * jz;
  CHECK((casimir - 3.5 * 4.5 * CMatrix::Identity(N + 1, N + 1)).norm() < 1e-10);
  const auto P = parity_x(N);
  CHECK((P * P - Eigen::MatrixXd::Identity(N + 1, N + 1)).norm() < 1e-12);
}

TEST_CASE("evolution keeps a valid state") {
  std::mt19937_64 rng(3);
  const auto s = evolve(random_state(6, rng, 3), 0.9, 0.4, 2.0);
  CHECK(std::abs(s.rho.trace() - 1.0) < 1e-12);
  CHECK((s.rho - s.rho.adjoint()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("SLD solves the Lyapunov equation") {
  std::mt19937_64 rng(11);
  const auto s = evolve(random_state(5, rng), 0.2, 0.1, 1.3);
  const auto r = qfi_and_sld(s);
  const CMatrix d = drho_db(s);
  CHECK((0.5 * (s.rho * r.sld + r.sld * s.rho) - d).norm() < 1e-8);
  CHECK(expectation(s.rho, r.sld * r.sld) == doctest::Approx(r.qfi).epsilon(1e-8));
}

TEST_CASE("parity readout saturates the GHZ QFI and never beats it") {
  const int N = 4;
  const double t = 1.0, T = 10.0, chi = 0.02;
  const auto ghz = build_input(InputKind::GHZ, N);
  const CMatrix P = parity_x(N).cast<std::complex<double>>();
  const double crb = t / (T * N * N * t * t * std::exp(-N * N * chi));
  double best = 1e300;
  for (int i = 1; i < 400; ++i) {
    const double b0 = i * std::numbers::pi / (400 * N * t);
    const double v = moments_precision(ghz, chi, b0, t, T, P);
    CHECK(v >= crb * (1 - 1e-6));
    best = std::min(best, v);
  }
  CHECK(best == doctest::Approx(crb).epsilon(1e-3));
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(build_input(InputKind::CSS, 100, 0, 0, 50), Error);
}
