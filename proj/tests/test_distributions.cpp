#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "distributions.hpp"
#include "doctest.h"
#include "special_functions.hpp"
#include "test_util.hpp"

using namespace pseudoexp;

namespace {

// Independent oracle for Gamma(2, 1): P(2, x) = 1 - e^{-x}(1 + x).
double gamma2_quantile_oracle(double p) {
  double lo = 0.0, hi = 60.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 1.0 - std::exp(-mid) * (1.0 + mid);
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("joint log density matches direct substitution") {
  CHECK(joint_logpdf(PseudoExpParams::full(1, 1, 1), ModelVariant::Full, 1.0, 1.0) ==
        doctest::Approx(std::log(2.0) - 3.0).epsilon(1e-14));
  // sub-model I with theta3 = 5: rate (1+x)*5 = 10 at x = 1
  CHECK(joint_logpdf(PseudoExpParams::sub_model_1(2, 5), ModelVariant::SubModelI, 1.0, 0.1) ==
        doctest::Approx(std::log(20.0) - 3.0).epsilon(1e-14));
  CHECK(joint_logpdf(PseudoExpParams::sub_model_2(2, 5), ModelVariant::SubModelII, 1.0, 0.1) ==
        doctest::Approx(std::log(10.0) - 2.5).epsilon(1e-14));
}

TEST_CASE("joint density domain and constraint errors") {
  const auto p = PseudoExpParams::full(1, 1, 1);
  CHECK_THROWS_AS(joint_logpdf(p, ModelVariant::Full, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(joint_logpdf(p, ModelVariant::Full, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(joint_logpdf(PseudoExpParams{2, 1, 5}, ModelVariant::SubModelII, 1, 1),
                  ConstraintError);
  CHECK_THROWS_AS(joint_logpdf(PseudoExpParams{2, 1, 5}, ModelVariant::SubModelI, 1, 1),
                  ConstraintError);
  CHECK_THROWS_AS(joint_logpdf(PseudoExpParams{0, 1, 5}, ModelVariant::Full, 1, 1),
                  ConstraintError);
  CHECK_THROWS_AS(joint_logpdf(PseudoExpParams{1, 0, 0}, ModelVariant::Full, 1, 1),
                  ConstraintError);
}

TEST_CASE("joint density integrates to one for each variant") {
  struct Case {
    PseudoExpParams params;
    ModelVariant variant;
  };
  const Case cases[] = {
      {PseudoExpParams::full(1.0, 0.5, 2.0), ModelVariant::Full},
      {PseudoExpParams::sub_model_1(2.0, 3.0), ModelVariant::SubModelI},
      {PseudoExpParams::sub_model_2(1.5, 2.5), ModelVariant::SubModelII},
  };
  for (const auto& c : cases) {
    // x tail: Exp(theta1); y tail depends on x, widest at the smallest rate
    const double bx = 60.0 / c.params.theta1;
    auto f = [&](double x, double y) { return joint_pdf(c.params, c.variant, x, y); };
    // integrate y to a generous cutoff based on the smallest conditional rate
    const double min_rate = c.params.theta2 + c.params.theta3 * 1e-6;
    const double by = 80.0 / std::max(min_rate, 0.1);
    const double total = testutil::integrate_2d(f, 1e-12, bx, 1e-12, by, 1e-9);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("marginal of x is exponential after integrating out y") {
  const auto params = PseudoExpParams::full(1.5, 0.7, 2.0);
  for (double x : {0.3, 1.0, 2.7}) {
    const double rate = params.theta2 + params.theta3 * x;
    const double by = 60.0 / rate;
    const double marginal =
        integrate_adaptive(
            [&](double y) { return joint_pdf(params, ModelVariant::Full, x, y); }, 1e-14, by,
            1e-12, 1e-13, 2048)
            .value;
    CHECK(marginal ==
          doctest::Approx(params.theta1 * std::exp(-params.theta1 * x)).epsilon(1e-8));
  }
}

TEST_CASE("bivariate sampler is deterministic in the seed") {
  const auto params = PseudoExpParams::full(2, 1, 3);
  Rng a(42), b(42), c(43);
  const auto s1 = sample_bivariate(params, ModelVariant::Full, 5, a);
  const auto s2 = sample_bivariate(params, ModelVariant::Full, 5, b);
  const auto s3 = sample_bivariate(params, ModelVariant::Full, 5, c);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s1.x(i) == s2.x(i));
    CHECK(s1.y(i) == s2.y(i));
  }
  CHECK(s1.x(0) != s3.x(0));

  Rng d(7), e(7);
  CHECK(sample_bivariate(params, ModelVariant::Full, 1, d).x(0) ==
        sample_bivariate(params, ModelVariant::Full, 1, e).x(0));
}

TEST_CASE("sampler moments match the marginal exponential") {
  const std::size_t n = 100000;
  Rng rng(2024);
  const auto s = sample_bivariate(PseudoExpParams::full(2, 1, 3), ModelVariant::Full, n, rng);
  const double mean_x = s.sum_x() / static_cast<double>(n);
  const double se = 0.5 / std::sqrt(static_cast<double>(n));  // sd of Exp(2) is 1/2
  CHECK(std::fabs(mean_x - 0.5) < 3.0 * se);
}

TEST_CASE("sub-model II conditional mean follows 1/(theta3 x)") {
  const std::size_t n = 100000;
  Rng rng(99);
  const auto s =
      sample_bivariate(PseudoExpParams::sub_model_2(2, 5), ModelVariant::SubModelII, n, rng);

  // x*y is Exp(5) exactly, supplying a sharp aggregate check
  double mean_xy = s.sum_xy() / static_cast<double>(n);
  CHECK(std::fabs(mean_xy - 0.2) < 3.0 * 0.2 / std::sqrt(static_cast<double>(n)));

  // binned conditional means against E[y|x] = 1/(5x)
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s.x(a) < s.x(b); });
  const std::size_t bins = 10;
  const std::size_t per = n / bins;
  for (std::size_t b = 0; b < bins; ++b) {
    double sum_y = 0.0, sum_expected = 0.0;
    for (std::size_t k = b * per; k < (b + 1) * per; ++k) {
      sum_y += s.y(order[k]);
      sum_expected += 1.0 / (5.0 * s.x(order[k]));
    }
    CHECK(sum_y / sum_expected == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("sub-model I sampling equals full-model sampling with theta2 == theta3") {
  Rng a(314), b(314);
  const auto s1 =
      sample_bivariate(PseudoExpParams::sub_model_1(2, 3), ModelVariant::SubModelI, 10000, a);
  const auto s2 =
      sample_bivariate(PseudoExpParams::full(2, 3, 3), ModelVariant::Full, 10000, b);
  CHECK(testutil::two_sample_ks(s1.xs(), s2.xs()) < 0.02);
  CHECK(testutil::two_sample_ks(s1.ys(), s2.ys()) < 0.02);
}

TEST_CASE("lomax closed forms") {
  const LomaxParams l{3.0, 2.0};
  CHECK(lomax_mean(l) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lomax_variance(l) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lomax_cdf(l, 0.0) == 0.0);
  CHECK(lomax_pdf(l, 0.0) == doctest::Approx(1.5).epsilon(1e-14));  // shape/scale

  CHECK_THROWS_AS(lomax_mean(LomaxParams{1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(lomax_variance(LomaxParams{2.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(lomax_pdf(l, -0.1), std::domain_error);

  // median of Lomax(4, 5)
  CHECK(lomax_quantile(LomaxParams{4, 5}, 0.5) ==
        doctest::Approx(5.0 * (std::pow(2.0, 0.25) - 1.0)).epsilon(1e-12));
}

TEST_CASE("lomax cdf is monotone from 0 to 1 and inverts its quantile") {
  const LomaxParams l{2.5, 1.7};
  double prev = 0.0;
  for (double t = 0.0; t < 400.0; t += 2.0) {
    const double c = lomax_cdf(l, t);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(lomax_cdf(l, 1e8) == doctest::Approx(1.0).epsilon(1e-6));
  for (double p : {0.01, 0.2, 0.5, 0.9, 0.999}) {
    CHECK(lomax_cdf(l, lomax_quantile(l, p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("gamma quantile closed-form checks") {
  // exponential median
  CHECK(gamma_quantile(GammaParams{1, 2}, 0.5) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-10));
  // Gamma(2,1) equal-tail 95% interval against the closed-form CDF oracle
  CHECK(gamma_quantile(GammaParams{2, 1}, 0.025) ==
        doctest::Approx(gamma2_quantile_oracle(0.025)).epsilon(1e-9));
  CHECK(gamma_quantile(GammaParams{2, 1}, 0.975) ==
        doctest::Approx(gamma2_quantile_oracle(0.975)).epsilon(1e-9));
  CHECK(gamma_quantile(GammaParams{2, 1}, 0.025) == doctest::Approx(0.2422).epsilon(2e-4));
  CHECK(gamma_quantile(GammaParams{2, 1}, 0.975) == doctest::Approx(5.5716).epsilon(2e-4));
}

TEST_CASE("gamma quantile inverts the incomplete gamma across shapes and levels") {
  for (double shape : {0.3, 1.0, 5.0, 22.0, 504.0}) {
    for (double p : {1e-9, 0.025, 0.5, 0.975, 1.0 - 1e-9}) {
      const double q = gamma_quantile_standard(shape, p);
      CHECK(std::fabs(gamma_p(shape, q) - p) < 1e-10);
    }
  }
  CHECK_THROWS_AS(gamma_quantile(GammaParams{2, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_quantile(GammaParams{2, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("regularized incomplete gamma complements sum to one") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.2 + 30.0 * rng.uniform();
    const double x = 40.0 * rng.uniform();
    CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("gamma pdf integrates to one") {
  for (const GammaParams g : {GammaParams{0.7, 2.0}, GammaParams{1.0, 1.0},
                              GammaParams{2.5, 0.5}, GammaParams{22.0, 12.0}}) {
    const double upper = (g.shape + 40.0 * std::sqrt(g.shape) + 40.0) / g.rate;
    const double total =
        integrate_adaptive([&](double x) { return gamma_pdf(g, x); }, 0.0, upper, 1e-11,
                           1e-13, 4096)
            .value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("gamma sampler reproduces moments for all shape regimes") {
  const std::size_t n = 100000;
  for (const GammaParams g : {GammaParams{0.5, 1.0}, GammaParams{1.0, 2.0},
                              GammaParams{2.5, 1.5}, GammaParams{22.0, 12.0}}) {
    Rng rng(1234);
    std::vector<double> draws(n);
    for (auto& d : draws) d = gamma_sample(g, rng);
    const double se = std::sqrt(g.shape) / g.rate / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(testutil::mean_of(draws) - g.shape / g.rate) < 4.0 * se);
    // distribution-level check
    CHECK(testutil::ks_statistic(draws, [&](double x) { return gamma_cdf(g, x); }) < 0.01);
  }
}

TEST_CASE("exponential sampler is the inverse cdf of the uniform stream") {
  Rng a(9);
  Rng probe(9);
  const double u = probe.uniform();
  CHECK(exponential_sample(2.0, a) == -std::log(u) / 2.0);
  CHECK_THROWS_AS(exponential_sample(0.0, a), std::domain_error);
}
