#include "conjugate.hpp"

#include <cmath>
#include <limits>

namespace pseudoexp {

GammaParams PriorSpec::effective(int parameter_id) const {
  if (kind == Kind::Improper) return {0.0, 0.0};
  switch (parameter_id) {
    case 1: return theta1;
    case 2: return theta2;
    case 3: return theta3;
  }
  throw std::invalid_argument("PriorSpec: parameter_id must be 1, 2 or 3");
}

namespace {

void check_proper_prior(const PriorSpec& prior, int parameter_id) {
  if (prior.kind == PriorSpec::Kind::IndependentGamma) {
    validate_gamma(prior.effective(parameter_id), "prior");
  }
}

GammaPosterior update(const PriorSpec& prior, int parameter_id, std::size_t n,
                      double statistic) {
  check_proper_prior(prior, parameter_id);
  const GammaParams g = prior.effective(parameter_id);
  if (prior.kind == PriorSpec::Kind::Improper && (n < 1 || !(statistic > 0.0))) {
    throw ProprietyError("improper prior requires n >= 1 and a positive statistic");
  }
  GammaPosterior post;
  post.shape = g.shape + static_cast<double>(n);
  post.rate = g.rate + statistic;
  post.parameter_id = parameter_id;
  return post;
}

}  // namespace

GammaPosterior posterior_theta1(const PriorSpec& prior, const SampleStats& s) {
  return update(prior, 1, s.n, s.sum_x);
}

GammaPosterior posterior_theta1(const PriorSpec& prior, const BivariateSample& sample) {
  return posterior_theta1(prior, sample.stats());
}

GammaPosterior posterior_theta3_sub1(const PriorSpec& prior, const SampleStats& s) {
  return update(prior, 3, s.n, s.sum_y + s.sum_xy);
}

GammaPosterior posterior_theta3_sub1(const PriorSpec& prior, const BivariateSample& sample) {
  return posterior_theta3_sub1(prior, sample.stats());
}

GammaPosterior posterior_theta3_sub2(const PriorSpec& prior, const SampleStats& s) {
  return update(prior, 3, s.n, s.sum_xy);
}

GammaPosterior posterior_theta3_sub2(const PriorSpec& prior, const BivariateSample& sample) {
  return posterior_theta3_sub2(prior, sample.stats());
}

double full_model_theta23_log_kernel(const PriorSpec& prior, const BivariateSample& sample,
                                     double theta2, double theta3) {
  if (theta2 < 0.0 || theta3 < 0.0 || !(theta2 + theta3 > 0.0)) {
    throw std::invalid_argument(
        "theta23 kernel: theta2, theta3 must be nonnegative and not both zero");
  }
  const GammaParams g2 = prior.effective(2);
  const GammaParams g3 = prior.effective(3);

  double value = 0.0;
  // prior factors; a zero coordinate kills the kernel for alpha > 1 and makes
  // it divergent for alpha < 1
  auto add_gamma_kernel = [&](double theta, const GammaParams& g, const char* name) {
    if (theta == 0.0) {
      if (g.shape < 1.0) {
        throw std::domain_error(std::string("theta23 kernel diverges at ") + name + " = 0");
      }
      if (g.shape > 1.0) {
        value = -std::numeric_limits<double>::infinity();
      }
      return;  // shape == 1: factor is constant
    }
    value += (g.shape - 1.0) * std::log(theta) - g.rate * theta;
  };
  add_gamma_kernel(theta2, g2, "theta2");
  add_gamma_kernel(theta3, g3, "theta3");
  if (value == -std::numeric_limits<double>::infinity()) return value;

  for (std::size_t i = 0; i < sample.size(); ++i) {
    value += std::log(theta2 + theta3 * sample.x(i));
  }
  value -= theta2 * sample.sum_y() + theta3 * sample.sum_xy();
  return value;
}

LomaxParams posterior_predictive(const GammaPosterior& posterior) {
  if (!(posterior.shape > 0.0) || !(posterior.rate > 0.0)) {
    throw ProprietyError("predictive requires a proper gamma posterior");
  }
  return LomaxParams{posterior.shape, posterior.rate};
}

PosteriorSummary summarize(const GammaPosterior& posterior, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("summarize: level must lie in (0,1)");
  }
  if (!(posterior.shape > 0.0) || !(posterior.rate > 0.0)) {
    throw ProprietyError("summarize requires a proper gamma posterior");
  }
  PosteriorSummary s;
  s.mean = posterior.mean();
  s.variance = posterior.variance();
  s.lower = gamma_quantile(posterior.params(), 0.5 * (1.0 - level));
  s.upper = gamma_quantile(posterior.params(), 0.5 * (1.0 + level));
  s.level = level;
  return s;
}

}  // namespace pseudoexp
