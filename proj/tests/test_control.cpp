#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dephasing/control.hpp"
#include "dephasing/errors.hpp"

using namespace dephasing;

namespace {

constexpr double kPi = std::numbers::pi;

Pulse px(double angle) { return {Eigen::Vector3d::UnitX(), angle, false, {}}; }

PulseSequence echo(double t) { return {{0.25, 0.75}, {px(kPi), px(kPi)}, t}; }

std::vector<double> equal_fractions(int q) {
  std::vector<double> f;
  for (int j = 1; j < q; ++j) f.push_back(double(j) / q);
  return f;
}

}  // namespace

TEST_CASE("free evolution covariance is chi(t)") {
  const auto m = NoiseModel::ornstein_uhlenbeck(0.5, 1.0);
  const auto cov = build_segment_covariance(m, PulseSequence::free(1.7));
  REQUIRE(cov.sigma.rows() == 1);
  CHECK(cov.sigma(0, 0) == doctest::Approx(chi_time_domain(m, 1.7)).epsilon(1e-10));
  const auto qf = quadratic_form_bound(cov, PulseSequence::free(1.7), 3.4);
  CHECK(qf.value == doctest::Approx(1.7 * 1.7 / chi_time_domain(m, 1.7)).epsilon(1e-10));
  CHECK(qf.total == doctest::Approx(2 * qf.value));
}

TEST_CASE("segment covariance sums to the total phase variance") {
  const auto m = NoiseModel::gaussian_cutoff(1.0, 1.0, 2.0);
  const auto seq = echo(1.3);
  const auto cov = build_segment_covariance(m, seq);
  CHECK(cov.sigma.sum() == doctest::Approx(chi_time_domain(m, 1.3)).epsilon(1e-8));
  CHECK((cov.sigma - cov.sigma.transpose()).norm() < 1e-14);
}

TEST_CASE("white noise: quadratic form is independent of the pulses") {
  const auto w = NoiseModel::white(0.3, 2.0);
  for (int q = 1; q <= 8; ++q) {
    PulseSequence seq{equal_fractions(q), std::vector<Pulse>(q - 1, px(kPi)), 1.5};
    const auto qf = quadratic_form_bound(build_segment_covariance(w, seq), seq);
    CHECK(qf.value == doctest::Approx(1.5 / 0.6).epsilon(1e-12));
  }
  const auto nb = controlled_nogo_bound(100, 2.0, ControlRegime::White, w, 4);
  CHECK(nb.precision_bound == doctest::Approx(0.6 / 2.0));
}

TEST_CASE("toggling frame and block detection") {
  SUBCASE("echo collapses to one block with alternating signs") {
    const auto c = detect_dp_blocks(echo(1.0));
    CHECK(c.rows() == 1);
    CHECK(c.signs == std::vector<int>{1, -1, 1});
  }
  SUBCASE("quarter turns change the generator") {
    const PulseSequence seq{{1.0 / 3, 2.0 / 3}, {px(kPi / 2), px(kPi / 2)}, 1.0};
    const auto g = toggling_generators(seq);
    CHECK(std::abs(g[1].z()) < 1e-12);
    CHECK(detect_dp_blocks(seq).rows() >= 2);
  }
  SUBCASE("opaque pulses") {
    PulseSequence seq = echo(1.0);
    seq.pulses[1] = Pulse{{}, 0.0, true, "black-box"};
    CHECK_THROWS_AS(detect_dp_blocks(seq, true), Error);
    const auto c = detect_dp_blocks(seq);
    CHECK(c.fallback);
    CHECK(c.rows() == 3);
  }
}

TEST_CASE("compression never increases the quadratic form") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int k = 0; k < 200; ++k) {
    const int Q = 3 + int(rng() % 5);
    Eigen::MatrixXd A(Q, Q);
    for (int i = 0; i < Q; ++i)
      for (int j = 0; j < Q; ++j) A(i, j) = g(rng);
    const Eigen::MatrixXd sigma = A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(Q, Q);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2, Q);
    for (int j = 0; j < Q; ++j) S(j % 2, j) = (rng() & 1) ? 1.0 : -1.0;
    const auto r = check_compression_monotonicity(sigma, S, Eigen::VectorXd::Ones(Q));
    CHECK(r.compressed <= r.full * (1 + 1e-12));
    CHECK(r.idempotence_error < 1e-9);
    CHECK(r.spectrum_error < 1e-9);
  }
  Eigen::MatrixXd S(2, 3);
  S << 1, 1, 0, 2, 2, 0;
  CHECK_THROWS_AS(check_compression_monotonicity(Eigen::MatrixXd::Identity(3, 3), S,
                                                 Eigen::VectorXd::Ones(3)),
                  Error);
}

TEST_CASE("ill-conditioned covariance is rejected") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 1 - 1e-15, 1 - 1e-15, 1;
  const PulseSequence seq{{0.5}, {px(kPi)}, 1.0};
  CHECK_THROWS_AS(quadratic_form_bound({s, 1.0}, seq), Error);
}

TEST_CASE("K: closed form, Leibniz, determinant, short-time numerics") {
  for (double s : {0.0, 1.0, 2.0, 0.5}) {
    std::vector<double> mom;
    for (int k = 0; k < 7; ++k) mom.push_back(gaussian_cutoff_moment(1.0, s, 1.0, k));
    for (int q = 1; q <= 7; ++q) {
      const double K = kq_hankel_gaussian(q, s);
      const auto bf = kq_bruteforce(q, mom);
      CHECK(bf.leibniz == doctest::Approx(K).epsilon(1e-9));
      CHECK(bf.determinant == doctest::Approx(K).epsilon(1e-9));
    }
    for (int q = 1; q <= 4; ++q) {
      const auto num = kq_numeric(NoiseModel::gaussian_cutoff(1.0, s, 1.0), equal_fractions(q));
      CHECK(num.K == doctest::Approx(kq_hankel_gaussian(q, s)).epsilon(1e-6));
    }
  }
  // dimensionless: omega_c drops out
  CHECK(kq_hankel_gaussian(5, 1.0, 1.0, 7.0) == doctest::Approx(kq_hankel_gaussian(5, 1.0)));
  // K depends only on the pair count, so Q' = 2n - 1 and 2n agree
  CHECK(kq_hankel_gaussian(5, 1.0) == doctest::Approx(kq_hankel_gaussian(6, 1.0)));
}

TEST_CASE("K error paths") {
  std::vector<double> mom(12, 1.0);
  CHECK_THROWS_AS(kq_bruteforce(11, mom), Error);
  CHECK_THROWS_AS(kq_numeric(NoiseModel::white(1, 1), {0.5}), Error);
  CHECK_THROWS_AS(kq_numeric(NoiseModel::ornstein_uhlenbeck(1, 1), {0.5}), Error);
  CHECK_THROWS_AS(kq_numeric(NoiseModel::brownian(1, 1), {0.5}), Error);
}

TEST_CASE("no-go bound from K") {
  const auto nb = controlled_nogo_bound_from_K(100, 2.0, 3.0, 4.0);
  CHECK(nb.t_star == doctest::Approx(2.0 / 300.0));
  CHECK(nb.precision_bound == doctest::Approx(3.0 / (2.0 * 2.0 * 100)));
}

TEST_CASE("controlled total QFI is capped by the noiseless value") {
  const auto m = NoiseModel::gaussian_cutoff(1.0, 1.0, 1.0);
  const double small = controlled_total_qfi(10, 1.0, m, equal_fractions(3), 1e-3);
  CHECK(small == doctest::Approx(100 * 1e-3).epsilon(1e-9));
}

TEST_CASE("rotations") {
  const int N = 5;
  const auto U = rotation_unitary(N, Eigen::Vector3d::UnitX(), kPi);
  CHECK((U * U.adjoint() - CMatrix::Identity(N + 1, N + 1)).norm() < 1e-12);
  const CMatrix jz = spin_jz(N).cast<std::complex<double>>();
  CHECK((U.adjoint() * jz * U + jz).norm() < 1e-10);
}

TEST_CASE("continuous control sliced into pulses") {
  ControlField u;
  u.t = 2.0;
  for (int l = 0; l < 101; ++l) u.samples.push_back(Eigen::Vector3d(kPi / 2.0, 0, 0));
  const auto seq = continuous_to_pulsed(u, 10);
  double total = 0;
  for (const auto& p : seq.pulses) total += p.angle * p.axis.x();
  CHECK(total == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(seq.fractions.front() == doctest::Approx(0.05));
}

TEST_CASE("controlled mixture: Monte Carlo against the deterministic reference") {
  const auto m = NoiseModel::ornstein_uhlenbeck(0.5, 1.0);
  const PulseSequence seq{{1.0 / 3, 2.0 / 3}, {px(kPi / 2), px(kPi / 2)}, 1.0};
  const auto cov = build_segment_covariance(m, seq);
  const auto comp = detect_dp_blocks(seq);
  const auto rho0 = build_input(InputKind::GHZ, 3);
  const auto ref = controlled_mixture_reference(rho0, seq, cov, comp, 0.4);
  const auto mc = simulate_controlled_mixture(rho0, seq, cov, comp, 0.4, 40000, 17);
  CHECK((mc.state.rho - ref.rho).norm() < 5 * mc.stderr_frobenius);
  CHECK_THROWS_AS(simulate_controlled_mixture(rho0, seq, cov, comp, 0.4, 1000, 1, 10), Error);
}

TEST_CASE("Gaussian overlap") {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, 0.3, 0.3, 0.5;
  const Eigen::Vector2d d(0.4, -0.2);
  CHECK(gaussian_overlap_numeric(s, d) == doctest::Approx(gaussian_overlap(s, d)).epsilon(1e-8));
}
