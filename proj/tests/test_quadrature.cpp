#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "quadrature.hpp"

using namespace pseudoexp;

TEST_CASE("kronrod rule is exact on polynomials") {
  double err = 0.0;
  const double v = gauss_kronrod_15([](double x) { return x * x; }, 0.0, 1.0, &err);
  CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(err < 1e-14);

  const double v9 = gauss_kronrod_15([](double x) { return 10.0 * std::pow(x, 9); },
                                     -1.0, 2.0, nullptr);
  CHECK(v9 == doctest::Approx(std::pow(2.0, 10) - 1.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration reaches tight tolerances") {
  const auto sin_result =
      integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846,
                         1e-13, 1e-15, 256);
  CHECK(sin_result.converged);
  CHECK(sin_result.value == doctest::Approx(2.0).epsilon(1e-12));

  // sharply peaked Gaussian
  const auto peak = integrate_adaptive(
      [](double x) { return std::exp(-1000.0 * (x - 0.5) * (x - 0.5)); }, 0.0, 1.0, 1e-13,
      1e-14, 2048);
  CHECK(peak.converged);
  CHECK(peak.value == doctest::Approx(std::sqrt(3.14159265358979323846 / 1000.0))
                          .epsilon(1e-10));
}

TEST_CASE("panel budget exhaustion is reported, not hidden") {
  const auto r = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-4)); },
                                    0.0, 1.0, 1e-15, 0.0, 8);
  CHECK_FALSE(r.converged);
}

TEST_CASE("panels tile the interval in order") {
  const auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -2.0, 3.0,
                                    1e-12, 1e-13, 512);
  REQUIRE(r.converged);
  REQUIRE(!r.panels.empty());
  CHECK(r.panels.front().a == -2.0);
  CHECK(r.panels.back().b == 3.0);
  for (std::size_t i = 1; i < r.panels.size(); ++i) {
    CHECK(r.panels[i].a == r.panels[i - 1].b);
  }
  double sum = 0.0;
  for (const auto& p : r.panels) sum += p.integral;
  CHECK(sum == doctest::Approx(r.value).epsilon(1e-13));
}

TEST_CASE("degenerate interval integrates to zero") {
  const auto r = integrate_adaptive([](double x) { return x; }, 1.0, 1.0, 1e-12, 0.0, 16);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
}
