#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anapt/calibration.hpp"

#include <cmath>

using namespace anapt;

TEST_CASE("seed derivation produces distinct, deterministic streams") {
  CHECK(detail::derive_seed(1, 0) == detail::derive_seed(1, 0));
  CHECK(detail::derive_seed(1, 0) != detail::derive_seed(1, 1));
  CHECK(detail::derive_seed(1, 0) != detail::derive_seed(2, 0));
}

TEST_CASE("pairwise mean matches the naive mean") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.5, -1.5};
  CHECK(detail::mean_of(v) == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(detail::mean_of({}) == 0.0);
  CHECK(detail::mean_of({7.0}) == 7.0);
}

TEST_CASE("default tables carry the shipped constants") {
  const auto t = CalibrationTables::defaults();
  CHECK(t.at(Family::gaussian).rho.rho == doctest::Approx(1.154));
  CHECK(t.at(Family::uniform).rho.rho == doctest::Approx(1.000));
  CHECK(t.at(Family::rayleigh).constants.c1 == doctest::Approx(0.726));
  CHECK(t.at(Family::exponential).constants.c2 == doctest::Approx(0.393));
  CHECK(!t.recalibrated);
}

TEST_CASE("rho estimates land near the tabulated mean/median ratios") {
  struct Case {
    Family family;
    double expect;
  } cases[] = {{Family::gaussian, 1.154},
               {Family::uniform, 1.000},
               {Family::rayleigh, 1.136},
               {Family::exponential, 1.265}};
  for (const auto& c : cases) {
    const auto est = estimate_rho(c.family, 20000, 8, 123);
    CHECK(est.rho == doctest::Approx(c.expect).epsilon(0.02));
    CHECK(est.sd >= 0.0);
    CHECK(est.sd < 0.05);
  }
  CHECK_THROWS_AS((void)estimate_rho(Family::gaussian, 100, 8, 1), DomainError);
  CHECK_THROWS_AS((void)estimate_rho(Family::gaussian, 20000, 1, 1), DomainError);
}

TEST_CASE("empirical mean lifetime agrees with the quadrature value") {
  for (Family f : {Family::gaussian, Family::uniform, Family::rayleigh, Family::exponential}) {
    const auto [empirical, theoretical] = validate_mean_lifetime(f, 100000, 5);
    CHECK(empirical == doctest::Approx(theoretical).epsilon(0.02));
  }
}

TEST_CASE("nelder-mead minimizes a shifted quadratic") {
  auto cost = [](const std::array<double, 2>& x) {
    const double a = x[0] - 1.3, b = x[1] + 0.4;
    return a * a + 4.0 * b * b + 2.0;
  };
  const auto best = detail::nelder_mead_2d(cost, {0.0, 0.0});
  CHECK(best[0] == doctest::Approx(1.3).epsilon(1e-5));
  CHECK(best[1] == doctest::Approx(-0.4).epsilon(1e-5));
}

TEST_CASE("template fixed point solves its defining equation") {
  const double d = 0.8, L0 = 0.9, c1 = 0.845, c2 = 0.809;
  const double L = detail::template_fixed_point(d, L0, c1, c2);
  CHECK(L == doctest::Approx(L0 * std::exp(-c1 * std::pow(d / (d + L), c2))).epsilon(1e-12));
  CHECK(detail::template_fixed_point(0.0, L0, c1, c2) == doctest::Approx(L0).epsilon(1e-12));
}

TEST_CASE("compensation fit rejects unidentifiable sweeps and short runs") {
  CHECK_THROWS_AS((void)fit_compensation_constants(Family::gaussian, 5, 1), DomainError);
  CHECK_THROWS_AS((void)fit_compensation_constants(Family::gaussian, 10, 1, {0.5, 1.0}),
                  OptimizerDiverged);
  CHECK_THROWS_AS((void)fit_compensation_constants(Family::gaussian, 10, 1, {0.0}),
                  OptimizerDiverged);
}

TEST_CASE("gaussian compensation fit reproduces the shipped constants") {
  // Reduced grid and trial count keep the run short; the fitted constants
  // should still land near the tabulated (0.845, 0.809).
  const auto c =
      fit_compensation_constants(Family::gaussian, 12, 2024, {0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(c.c1 == doctest::Approx(0.845).epsilon(0.12));
  CHECK(c.c2 == doctest::Approx(0.809).epsilon(0.15));
}
