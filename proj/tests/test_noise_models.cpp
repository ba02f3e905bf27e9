#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dephasing/errors.hpp"
#include "dephasing/fit.hpp"
#include "dephasing/io.hpp"
#include "dephasing/noise_models.hpp"

using namespace dephasing;

namespace {

double ou_chi(double s2, double w, double t) {
  const double x = w * t;
  return 2 * s2 / (w * w) * (x - 1 + std::exp(-x));
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no dephasing::Error thrown");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("OU decoherence: time route, spectral route, closed form") {
  const auto m = NoiseModel::ornstein_uhlenbeck(0.5, 1.3);
  for (double t : {1e-3, 0.05, 0.7, 3.0, 12.0}) {
    const double ref = ou_chi(0.5, 1.3, t);
    CHECK(chi_time_domain(m, t) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(chi_spectrum_domain(m, t) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("white and Brownian closed forms") {
  const auto w = NoiseModel::white(0.2, 3.0);
  CHECK(chi_time_domain(w, 2.5) == doctest::Approx(0.2 * 3.0 * 2.5));
  CHECK(chi_spectrum_domain(w, 2.5) == doctest::Approx(1.5).epsilon(1e-9));

  // int_0^t int_0^t min(s, s') = t^3 / 3
  const auto b = NoiseModel::brownian(0.1, 2.0);
  const double t = 0.8;
  CHECK(chi_time_domain(b, t) == doctest::Approx(2 * 0.1 * 8.0 * t * t * t / 3).epsilon(1e-10));
  CHECK(kind_of([&] { chi_spectrum_domain(b, t); }) == ErrorKind::SpectrumUndefined);
}

TEST_CASE("integrated OU agrees with the integrated-filter route") {
  const auto xi = NoiseModel::integrated_ou(0.4, 1.1);
  for (double t : {0.1, 1.0, 4.0}) {
    CHECK(chi_integrated_process(xi, t) == doctest::Approx(chi_time_domain(xi, t)).epsilon(1e-7));
  }
}

TEST_CASE("Gaussian cutoff: moments and short-time law") {
  for (double s : {0.0, 1.0, 2.0}) {
    const auto m = NoiseModel::gaussian_cutoff(0.8, s, 1.7);
    for (int k = 0; k < 4; ++k) {
      CHECK(spectral_moment(m, k) ==
            doctest::Approx(gaussian_cutoff_moment(0.8, s, 1.7, k)).epsilon(1e-9));
    }
    const auto law = fit_short_time_law(m, fit::logspace(1e-4 / 1.7, 1e-2 / 1.7, 7));
    CHECK(law.n == 2);
    // chi ~ 2 m_0 t^2 at short times
    CHECK(law.amplitude * 1.7 * 1.7 == doctest::Approx(2 * spectral_moment(m, 0)).epsilon(1e-4));
  }
}

TEST_CASE("OU short-time law is quadratic, white is linear") {
  const auto ou = NoiseModel::ornstein_uhlenbeck(0.5, 1.0);
  const auto grid = fit::logspace(1e-4, 1e-2, 5);
  CHECK(fit_short_time_law(ou, grid).n == 2);
  CHECK(fit_short_time_law(ou, grid).chi0() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(fit_short_time_law(NoiseModel::white(0.05, 1.0), grid).n == 1);
  CHECK(kind_of([&] { fit_short_time_law(ou, fit::logspace(1e-3, 1e-1, 5)); }) ==
        ErrorKind::InvalidInput);
}

TEST_CASE("tabulated lag table reproduces OU") {
  std::vector<double> lag, val;
  for (int i = 0; i <= 4000; ++i) {
    lag.push_back(i * 0.005);
    val.push_back(0.5 * std::exp(-lag.back()));
  }
  const auto m = NoiseModel::tabulated_lag(lag, val);
  for (double t : {0.3, 2.0, 10.0}) {
    CHECK(chi_time_domain(m, t) == doctest::Approx(ou_chi(0.5, 1.0, t)).epsilon(1e-4));
  }
  CHECK(kind_of([&] { chi_time_domain(m, 25.0); }) == ErrorKind::OutOfTable);
}

TEST_CASE("filter kernels") {
  CHECK(filter_free(2.0, 1e-9) == doctest::Approx(4.0));
  CHECK(filter_free(2.0, std::numbers::pi) == doctest::Approx(0.0));
  CHECK(filter_integrated(2.0, 1e-4) == doctest::Approx(4.0).epsilon(1e-6));  // t^4/4
}

TEST_CASE("parameter validation") {
  CHECK(kind_of([] { NoiseModel::ornstein_uhlenbeck(-1.0, 1.0).validate(); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([] { NoiseModel::gaussian_cutoff(1.0, -1.5, 1.0).validate(); }) ==
        ErrorKind::InvalidInput);
  CHECK(kind_of([] { chi_time_domain(NoiseModel::white(1, 1), -1.0); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { noise_kind_from_string("Pink"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("noise JSON round trip") {
  const auto m = NoiseModel::gaussian_cutoff(0.3, 2.0, 4.0);
  const auto back = io::noise_from_json(io::noise_to_json(m), ".");
  CHECK(back.kind == m.kind);
  CHECK(back.params == m.params);
  CHECK(chi_time_domain(back, 0.4) == chi_time_domain(m, 0.4));
}
