#include <doctest.h>

#include <cmath>
#include <random>

#include "dephasing/bounds.hpp"
#include "dephasing/dicke.hpp"
#include "dephasing/errors.hpp"

using namespace dephasing;

TEST_CASE("purification bound reduces to 4 Var t^2 without noise") {
  CHECK(purification_qfi_bound(2.5, 0.0, 0.3) == doctest::Approx(4 * 2.5 * 0.09));
}

TEST_CASE("purification bound dominates the exact QFI") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 40; ++k) {
    const int N = 1 + int(rng() % 10);
    const auto rho0 = random_state(N, rng, 1 + int(rng() % (N + 1)));
    for (double chi : {0.0, 0.05, 0.5, 3.0}) {
      const double t = 0.8;
      const double F = qfi_and_sld(evolve(rho0, 0.1, chi, t)).qfi;
      CHECK(F <= purification_qfi_bound(variance_jz(rho0), chi, t) * (1 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("purification moments at the optimal zeta reproduce the bound") {
  const double V = 3.0, chi = 0.2, t = 1.1;
  const auto pm = purification_moments(optimal_zeta(V, chi), V, chi, t);
  CHECK(pm.qfi == doctest::Approx(purification_qfi_bound(V, chi, t)).epsilon(1e-10));
}

TEST_CASE("closed-form optimum matches numerical maximisation") {
  for (int n : {1, 2, 3, 5}) {
    for (int N : {3, 50, 2000}) {
      BoundQuery q{N, 2.0, DecayLaw{n, 0.3, 1.7}, {}, {}};
      if (n == 1) q.t_max = 50.0;
      const auto closed = optimal_time_and_bound(q);
      const auto num = maximize_total_qfi([&](double t) { return purification_total(q, t); }, 1e-9,
                                          q.t_max.value_or(1e3));
      CHECK(num.F_tot == doctest::Approx(closed.F_tot).epsilon(1e-8));
      CHECK(closed.precision == doctest::Approx(1 / std::sqrt(closed.F_tot)));
      if (n == 1) {
        // the infimum is only reached as t grows without limit
        CHECK(precision_lower_bound(q) <= closed.precision * closed.precision);
      } else {
        CHECK(precision_lower_bound(q) == doctest::Approx(closed.precision * closed.precision));
      }
    }
  }
}

TEST_CASE("GHZ total and optimum") {
  const BoundQuery q{20, 3.0, DecayLaw{2, 0.5, 1.0}, {}, {}};
  const double t = 0.01;
  CHECK(ghz_total(q, t) == doctest::Approx(3.0 / t * 400 * t * t * std::exp(-400 * 0.5 * t * t)));
  const auto g = ghz_optimal(q);
  const auto num = maximize_total_qfi([&](double s) { return ghz_total(q, s); }, 1e-6, 10.0);
  CHECK(g.F_tot == doctest::Approx(num.F_tot).epsilon(1e-9));
  CHECK(g.F_tot <= optimal_time_and_bound(q).F_tot);
}

TEST_CASE("colored n = 2 scaling is N^(1/2) in Fisher information") {
  auto F = [](int N) { return optimal_time_and_bound({N, 1.0, DecayLaw{2, 1.0, 1.0}, {}, {}}).F_tot; };
  CHECK(std::log(F(10000) / F(100)) / std::log(100.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("invalid queries") {
  CHECK_THROWS_AS((BoundQuery{0, 1.0, DecayLaw{2, 1.0, 1.0}, {}, {}}).validate(), Error);
  CHECK_THROWS_AS((BoundQuery{5, -1.0, DecayLaw{2, 1.0, 1.0}, {}, {}}).validate(), Error);
  CHECK_THROWS_AS((BoundQuery{5, 1.0, DecayLaw{0, 1.0, 1.0}, {}, {}}).validate(), Error);
}
