#include <doctest.h>

#include <cmath>
#include <random>

#include "dephasing/errors.hpp"
#include "dephasing/montecarlo.hpp"

using namespace dephasing;

TEST_CASE("sampling is reproducible per seed") {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 0.5, 0.5, 2.0;
  const auto a = sample_gaussian(c, {1, 2}, 100, 9);
  const auto b = sample_gaussian(c, {1, 2}, 100, 9);
  const auto d = sample_gaussian(c, {1, 2}, 100, 10);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != d.samples);
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(sample_gaussian(bad, {1, 2}, 10, 1), Error);
}

TEST_CASE("phase variance and covariance match the analytic process") {
  const auto m = NoiseModel::ornstein_uhlenbeck(0.5, 1.0);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto ens = sample_phase_process(m, grid, 60000, 4);
  for (int k = 0; k < 3; ++k) {
    const auto v = empirical_variance(ens, k);
    CHECK(std::abs(v.value - chi_time_domain(m, grid[k])) < 4 * v.stderr);
  }
  const double c01 = rectangle_covariance(m, 0, 0.5, 0, 1.0);
  CHECK(empirical_covariance(ens, 0, 1) == doctest::Approx(c01).epsilon(0.03));
}

TEST_CASE("OU path simulation reproduces chi") {
  const auto phases = simulate_ou_phase(0.5, 1.0, 1.0, 400, 40000, 8);
  double s2 = 0;
  for (double p : phases) s2 += p * p;
  s2 /= double(phases.size());
  const double ref = chi_time_domain(NoiseModel::ornstein_uhlenbeck(0.5, 1.0), 1.0);
  CHECK(std::abs(s2 - ref) < 4 * ref * std::sqrt(2.0 / double(phases.size())));
}

TEST_CASE("averaged state approaches the dephased state") {
  const auto m = NoiseModel::white(0.05, 1.0);
  const auto ens = sample_phase_process(m, {1.0}, 50000, 21);
  const auto rho0 = build_input(InputKind::GHZ, 4);
  const auto est = empirical_average_state(rho0, ens, 0.3, 1.0);
  const auto ref = evolve(rho0, 0.3, chi_time_domain(m, 1.0), 1.0);
  CHECK((est.state.rho - ref.rho).norm() < 5 * est.stderr_frobenius);
}

TEST_CASE("fidelity") {
  CVector a(2), b(2);
  a << 1, 0;
  b << std::sqrt(0.3), std::sqrt(0.7);
  CHECK(fidelity(pure_state(a), pure_state(b)) == doctest::Approx(std::sqrt(0.3)));
  std::mt19937_64 rng(1);
  const auto r = random_state(4, rng);
  CHECK(fidelity(r.rho, r.rho) == doctest::Approx(1.0).epsilon(1e-10));
  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(fidelity(bad, pure_state(a)), Error);
}

TEST_CASE("fidelity curvature gives the QFI") {
  std::mt19937_64 rng(77);
  const auto rho0 = random_state(5, rng, 3);
  const double chi = 0.1, t = 1.0;
  const double F = qfi_and_sld(evolve(rho0, 0.2, chi, t)).qfi;
  const double Ff =
      fidelity_qfi([&](double b) { return evolve(rho0, b, chi, t).rho; }, 0.2, std::sqrt(8e-6 / F));
  CHECK(Ff == doctest::Approx(F).epsilon(5e-3));
}
