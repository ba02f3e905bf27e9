#include <doctest.h>

#include <cmath>

#include "dephasing/dicke.hpp"
#include "dephasing/gaussian_phase_space.hpp"

using namespace dephasing;

TEST_CASE("coherent state Gaussian QFI") {
  const double J = 40;
  const auto s = input_gaussian(1.0, 0.0, J);
  CHECK((s.cov - 0.5 * Eigen::Matrix2d::Identity()).norm() < 1e-14);
  CHECK(gaussian_qfi(s, 0.5).qfi == doctest::Approx(2 * J * 0.25));
}

TEST_CASE("closed OATS QFI matches the general Gaussian route") {
  for (double delta : {1.0, 0.2, 5.0}) {
    for (double chi : {0.0, 1e-3, 0.05}) {
      const int N = 300;
      const double t = 0.9;
      const auto s = evolve_averaged(input_gaussian(delta, 0.0, 0.5 * N), 0.0, t, chi);
      CHECK(oats_qfi(N, delta, chi, t) == doctest::Approx(gaussian_qfi(s, t).qfi).epsilon(1e-10));
    }
  }
}

TEST_CASE("OATS angles at zero are the coherent state") {
  const auto p = oats_params(0.0, 0.0, 10.0);
  CHECK(p.delta == doctest::Approx(1.0));
  CHECK(p.eta == doctest::Approx(0.0));
}

TEST_CASE("Gaussian CSS agrees with the exact spin state for small noise") {
  const int N = 200;
  const double chi = 1e-6, t = 1.0;
  const double exact = qfi_and_sld(evolve(build_input(InputKind::CSS, N), 0.0, chi, t)).qfi;
  CHECK(oats_qfi(N, 1.0, chi, t) == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("Holstein-Primakoff validity flags") {
  const double J = 50;
  CHECK(hp_validity(input_gaussian(1.0, 0.0, J), J).status == HpStatus::Valid);
  CHECK(hp_validity(input_gaussian(1e-4, 0.0, J), J).status != HpStatus::Valid);
}

TEST_CASE("table rows are consistent with the optimisers") {
  for (int N : {100, 1000}) {
    const auto ghz = ghz_optimal({N, 1.0, DecayLaw{2, 1.0, 1.0}, {}, {}});
    CHECK(table1_precision(Table1State::GHZ, NoiseRegime::ColoredN2, N) ==
          doctest::Approx(ghz.precision).epsilon(1e-9));
  }
  const auto row = table1_row(Table1State::GHZ, NoiseRegime::White, table1_default_N());
  CHECK(row.fitted_exponent == doctest::Approx(0.0).epsilon(1e-9));
  const auto noiseless = table1_row(Table1State::CSS, NoiseRegime::Noiseless, table1_default_N());
  CHECK(noiseless.fitted_exponent == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("optimal squeezing never beats the state-independent bound") {
  const DecayLaw law{2, 1.0, 1.0};
  for (int N : {100, 1000, 10000}) {
    for (double delta : {1.0, 0.3, 0.05}) {
      const auto o = oats_optimal_delta(N, 1.0, law, delta);
      CHECK(o.F_tot <= optimal_time_and_bound({N, 1.0, law, {}, {}}).F_tot * (1 + 1e-9));
    }
  }
}
