#include "distributions.hpp"

#include <cmath>
#include <limits>

#include "special_functions.hpp"

namespace pseudoexp {

double joint_logpdf(const PseudoExpParams& p, ModelVariant variant, double x, double y) {
  validate_params(p, variant);
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::domain_error("joint_logpdf: x and y must be positive");
  }
  const double rate_y = p.theta2 + p.theta3 * x;
  return std::log(p.theta1) - p.theta1 * x + std::log(rate_y) - rate_y * y;
}

double joint_pdf(const PseudoExpParams& p, ModelVariant variant, double x, double y) {
  return std::exp(joint_logpdf(p, variant, x, y));
}

double exponential_sample(double rate, Rng& rng) {
  if (!(rate > 0.0)) throw std::domain_error("exponential_sample: rate must be positive");
  return -std::log(rng.uniform()) / rate;
}

BivariateSample sample_bivariate(const PseudoExpParams& p, ModelVariant variant,
                                 std::size_t n, Rng& rng) {
  validate_params(p, variant);
  if (n < 1) throw std::invalid_argument("sample_bivariate: n must be at least 1");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = exponential_sample(p.theta1, rng);
    xs[i] = x;
    ys[i] = exponential_sample(p.theta2 + p.theta3 * x, rng);
  }
  return BivariateSample(std::move(xs), std::move(ys));
}

// ---- gamma -----------------------------------------------------------------

double gamma_logpdf(const GammaParams& g, double x) {
  validate_gamma(g, "gamma_logpdf");
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  if (x == 0.0) {
    if (g.shape > 1.0) return -std::numeric_limits<double>::infinity();
    if (g.shape == 1.0) return std::log(g.rate);
    return std::numeric_limits<double>::infinity();
  }
  return g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(x) - g.rate * x -
         std::lgamma(g.shape);
}

double gamma_pdf(const GammaParams& g, double x) { return std::exp(gamma_logpdf(g, x)); }

double gamma_cdf(const GammaParams& g, double x) {
  validate_gamma(g, "gamma_cdf");
  if (x <= 0.0) return 0.0;
  return gamma_p(g.shape, g.rate * x);
}

double gamma_quantile(const GammaParams& g, double level) {
  validate_gamma(g, "gamma_quantile");
  return gamma_quantile_standard(g.shape, level) / g.rate;
}

double gamma_sample(const GammaParams& g, Rng& rng) {
  validate_gamma(g, "gamma_sample");
  double shape = g.shape;
  double boost = 1.0;
  if (shape < 1.0) {
    // G(a) = G(a+1) * U^{1/a} for 0 < a < 1
    boost = std::pow(rng.uniform(), 1.0 / shape);
    shape += 1.0;
  }
  // Marsaglia-Tsang squeeze for shape >= 1
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return boost * d * v / g.rate;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return boost * d * v / g.rate;
    }
  }
}

// ---- Lomax (Pareto of the second kind) ---------------------------------------

namespace {
void validate_lomax(const LomaxParams& l) {
  if (!(l.shape > 0.0) || !(l.scale > 0.0)) {
    throw std::invalid_argument("lomax: shape and scale must be positive");
  }
}
}  // namespace

double lomax_logpdf(const LomaxParams& l, double t) {
  validate_lomax(l);
  if (t < 0.0) throw std::domain_error("lomax: t must be nonnegative");
  return std::log(l.shape) + l.shape * std::log(l.scale) -
         (l.shape + 1.0) * std::log(l.scale + t);
}

double lomax_pdf(const LomaxParams& l, double t) { return std::exp(lomax_logpdf(l, t)); }

double lomax_cdf(const LomaxParams& l, double t) {
  validate_lomax(l);
  if (t < 0.0) throw std::domain_error("lomax: t must be nonnegative");
  // 1 - (scale/(scale+t))^shape, evaluated without cancellation near t = 0
  return -std::expm1(l.shape * std::log(l.scale / (l.scale + t)));
}

double lomax_quantile(const LomaxParams& l, double level) {
  validate_lomax(l);
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("lomax_quantile: level must lie in (0,1)");
  }
  return l.scale * std::expm1(-std::log1p(-level) / l.shape);
}

double lomax_mean(const LomaxParams& l) {
  validate_lomax(l);
  if (!(l.shape > 1.0)) {
    throw std::domain_error("lomax_mean: finite only for shape > 1");
  }
  return l.scale / (l.shape - 1.0);
}

double lomax_variance(const LomaxParams& l) {
  validate_lomax(l);
  if (!(l.shape > 2.0)) {
    throw std::domain_error("lomax_variance: finite only for shape > 2");
  }
  return l.scale * l.scale * l.shape /
         ((l.shape - 1.0) * (l.shape - 1.0) * (l.shape - 2.0));
}

}  // namespace pseudoexp
