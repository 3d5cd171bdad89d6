#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "distributions.hpp"
#include "doctest.h"
#include "likelihood.hpp"
#include "rng.hpp"

using namespace pseudoexp;

namespace {

BivariateSample two_point_sample() { return BivariateSample({1.0, 2.0}, {1.0, 0.5}); }

PseudoExpParams random_params(ModelVariant v, Rng& rng) {
  const double t1 = 0.2 + 3.0 * rng.uniform();
  const double t3 = 0.2 + 3.0 * rng.uniform();
  switch (v) {
    case ModelVariant::SubModelI: return PseudoExpParams::sub_model_1(t1, t3);
    case ModelVariant::SubModelII: return PseudoExpParams::sub_model_2(t1, t3);
    case ModelVariant::Full: return PseudoExpParams::full(t1, 0.1 + 2.0 * rng.uniform(), t3);
  }
  return {};
}

}  // namespace

TEST_CASE("single-point factored log likelihood") {
  const BivariateSample s({1.0}, {1.0});
  const auto ll = log_likelihood(s, PseudoExpParams::full(1, 1, 1), ModelVariant::Full);
  CHECK(ll.marginal_term == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ll.conditional_term == doctest::Approx(std::log(2.0) - 2.0).epsilon(1e-14));
}

TEST_CASE("sub-model II conditional term has the n log theta3 + sum log x shape") {
  Rng rng(11);
  const auto s = sample_bivariate(PseudoExpParams::sub_model_2(1.0, 2.0),
                                  ModelVariant::SubModelII, 40, rng);
  const double theta3 = 1.7;
  const auto ll =
      log_likelihood(s, PseudoExpParams::sub_model_2(1.0, theta3), ModelVariant::SubModelII);
  const double expected = static_cast<double>(s.size()) * std::log(theta3) + s.sum_log_x() -
                          theta3 * s.sum_xy();
  CHECK(ll.conditional_term == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("factored total equals the sum of joint log densities") {
  Rng rng(21);
  for (ModelVariant v :
       {ModelVariant::Full, ModelVariant::SubModelI, ModelVariant::SubModelII}) {
    const auto truth = random_params(v, rng);
    const auto s = sample_bivariate(truth, v, 50, rng);
    for (int rep = 0; rep < 5; ++rep) {
      const auto params = random_params(v, rng);
      const auto ll = log_likelihood(s, params, v);
      double direct = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        direct += joint_logpdf(params, v, s.x(i), s.y(i));
      }
      CHECK(ll.total() == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form sub-model estimators") {
  const auto s = two_point_sample();  // Sx=3, Sy=1.5, Sxy=2
  const auto m1 = mle_submodel1(s);
  CHECK(m1.params.theta1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m1.params.theta3 == doctest::Approx(2.0 / 3.5).epsilon(1e-15));
  CHECK(m1.converged);
  CHECK_FALSE(m1.on_boundary);

  const auto m2 = mle_submodel2(s);
  CHECK(m2.params.theta1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m2.params.theta3 == doctest::Approx(1.0).epsilon(1e-15));

  const BivariateSample single({1.0}, {1.0});
  CHECK(mle_submodel1(single).params.theta1 == 1.0);
  CHECK(mle_submodel1(single).params.theta3 == 0.5);

  const BivariateSample pair({2.0}, {3.0});
  CHECK(mle_submodel2(pair).params.theta1 == 0.5);
  CHECK(mle_submodel2(pair).params.theta3 == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("sub-model estimators are consistent on large simulated samples") {
  {
    Rng rng(77);
    const auto s = sample_bivariate(PseudoExpParams::sub_model_1(2, 3),
                                    ModelVariant::SubModelI, 100000, rng);
    const auto m = mle_submodel1(s);
    CHECK(m.params.theta1 == doctest::Approx(2.0).epsilon(0.03));
    CHECK(m.params.theta3 == doctest::Approx(3.0).epsilon(0.03));
  }
  {
    Rng rng(78);
    const auto s = sample_bivariate(PseudoExpParams::sub_model_2(2, 5),
                                    ModelVariant::SubModelII, 100000, rng);
    const auto m = mle_submodel2(s);
    CHECK(m.params.theta1 == doctest::Approx(2.0).epsilon(0.03));
    CHECK(m.params.theta3 == doctest::Approx(5.0).epsilon(0.03));
  }
}

TEST_CASE("full-model estimator lands on the boundary when the data demand it") {
  const BivariateSample s({1.0, 2.0}, {1.0, 1.0});  // Sy=2, Sxy=3
  const auto m = mle_full(s);
  CHECK(m.params.theta1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.params.theta2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.params.theta3 == 0.0);
  CHECK(m.on_boundary);
  CHECK(m.converged);

  // grid-search oracle over [0,3]^2
  double best = -1e300;
  for (int i = 0; i <= 300; ++i) {
    for (int j = 0; j <= 300; ++j) {
      const double v = conditional_term_value(s, 0.01 * i, 0.01 * j);
      if (std::isfinite(v)) best = std::max(best, v);
    }
  }
  CHECK(conditional_term_value(s, m.params.theta2, m.params.theta3) >= best - 1e-9);
}

TEST_CASE("full-model estimator recovers sub-model II on its own data") {
  Rng rng(123);
  const auto s = sample_bivariate(PseudoExpParams::sub_model_2(2, 5),
                                  ModelVariant::SubModelII, 5000, rng);
  const auto m = mle_full(s);
  const double n = static_cast<double>(s.size());
  CHECK(m.params.theta2 <= 0.05);
  if (m.params.theta2 == 0.0) {
    CHECK(m.params.theta3 == doctest::Approx(n / s.sum_xy()).epsilon(1e-6));
  }
  CHECK(m.params.theta1 == n / s.sum_x());
}

TEST_CASE("full-model value dominates both sub-model embeddings") {
  Rng rng(31);
  const auto s =
      sample_bivariate(PseudoExpParams::full(1.5, 0.8, 2.0), ModelVariant::Full, 200, rng);
  const double n = static_cast<double>(s.size());
  const auto m = mle_full(s);
  const double at_max = conditional_term_value(s, m.params.theta2, m.params.theta3);
  const double sub1_theta = n / (s.sum_y() + s.sum_xy());
  CHECK(at_max >= conditional_term_value(s, sub1_theta, sub1_theta) - 1e-10);
  CHECK(at_max >= conditional_term_value(s, 0.0, n / s.sum_xy()) - 1e-10);
}

TEST_CASE("conditional term is concave along random segments") {
  Rng rng(55);
  const auto s =
      sample_bivariate(PseudoExpParams::full(1.0, 1.0, 1.0), ModelVariant::Full, 60, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const double a2 = 0.05 + 3.0 * rng.uniform(), a3 = 0.05 + 3.0 * rng.uniform();
    const double b2 = 0.05 + 3.0 * rng.uniform(), b3 = 0.05 + 3.0 * rng.uniform();
    const double mid = conditional_term_value(s, 0.5 * (a2 + b2), 0.5 * (a3 + b3));
    const double avg =
        0.5 * (conditional_term_value(s, a2, a3) + conditional_term_value(s, b2, b3));
    CHECK(mid >= avg - 1e-9);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(66);
  const auto s =
      sample_bivariate(PseudoExpParams::full(1.0, 0.7, 1.3), ModelVariant::Full, 80, rng);
  for (int rep = 0; rep < 20; ++rep) {
    const double t2 = 0.1 + 2.0 * rng.uniform();
    const double t3 = 0.1 + 2.0 * rng.uniform();
    const auto grad = conditional_term_gradient(s, t2, t3);
    const double h2 = 1e-6 * t2;
    const double h3 = 1e-6 * t3;
    const double fd2 = (conditional_term_value(s, t2 + h2, t3) -
                        conditional_term_value(s, t2 - h2, t3)) /
                       (2.0 * h2);
    const double fd3 = (conditional_term_value(s, t2, t3 + h3) -
                        conditional_term_value(s, t2, t3 - h3)) /
                       (2.0 * h3);
    CHECK(grad[0] == doctest::Approx(fd2).epsilon(1e-4));
    CHECK(grad[1] == doctest::Approx(fd3).epsilon(1e-4));
  }
}

TEST_CASE("degenerate conditional rate raises an evaluation error") {
  const BivariateSample s({1.0}, {1.0});
  CHECK_THROWS_AS(
      log_likelihood(s, PseudoExpParams{1.0, 0.0, 0.0}, ModelVariant::Full),
      std::exception);  // invalid params rejected before evaluation
  CHECK(conditional_term_value(s, 0.0, 0.0) ==
        -std::numeric_limits<double>::infinity());
}
