#include "pseudo_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "likelihood.hpp"
#include "special_functions.hpp"

namespace pseudoexp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void validate_pseudo_prior(const PseudoGammaPrior& p) {
  if (!(p.tau1 > 0.0) || !(p.tau2 > 0.0) || !(p.psi1 > 0.0) || !(p.psi3 > 0.0)) {
    throw std::invalid_argument("pseudo-gamma prior: tau1, tau2, psi1, psi3 must be positive");
  }
  if (p.psi2 < 0.0) {
    throw std::invalid_argument("pseudo-gamma prior: psi2 must be nonnegative");
  }
}

double prior_log_kernel(const PseudoGammaPrior& p, double theta1, double theta3) {
  validate_pseudo_prior(p);
  if (!(theta1 > 0.0) || !(theta3 > 0.0)) {
    throw std::domain_error("prior_log_kernel: theta1 and theta3 must be positive");
  }
  const double cond_rate = p.psi2 + p.psi3 * theta3;
  return p.tau2 * std::log(cond_rate) + (p.tau2 - 1.0) * std::log(theta1) -
         cond_rate * theta1 + (p.tau1 - 1.0) * std::log(theta3) - p.psi1 * theta3;
}

namespace {

double conditional_rate_statistic(const SampleStats& s, ModelVariant variant) {
  switch (variant) {
    case ModelVariant::SubModelI: return s.sum_y + s.sum_xy;
    case ModelVariant::SubModelII: return s.sum_xy;
    case ModelVariant::Full: break;
  }
  throw std::invalid_argument("pseudo-gamma marginals are defined for the sub-models only");
}

}  // namespace

double posterior_log_kernel(const PseudoGammaPrior& p, const SampleStats& stats,
                            ModelVariant variant, double theta1, double theta3) {
  validate_pseudo_prior(p);
  if (p.psi2 != 0.0) {
    throw std::invalid_argument("posterior_log_kernel requires the simpler prior (psi2 = 0)");
  }
  if (!(theta1 > 0.0) || !(theta3 > 0.0)) {
    throw std::domain_error("posterior_log_kernel: theta1 and theta3 must be positive");
  }
  const double n = static_cast<double>(stats.n);
  const double c = p.psi1 + conditional_rate_statistic(stats, variant);
  return (p.tau2 + n - 1.0) * std::log(theta1) - theta1 * (stats.sum_x + p.psi3 * theta3) +
         (p.tau1 + n - 1.0) * std::log(theta3) - theta3 * c;
}

double general_posterior_log_kernel(const PseudoGammaPrior& p,
                                    const std::optional<GammaParams>& theta2_prior,
                                    const BivariateSample& sample, ModelVariant variant,
                                    const PseudoExpParams& theta) {
  validate_pseudo_prior(p);
  validate_params(theta, variant);

  double value = log_likelihood(sample, theta, variant).total();
  // pseudo-prior contribution on (theta1, theta3), conditional-slice kernel only
  value += (p.tau2 - 1.0) * std::log(theta.theta1) -
           (p.psi2 + p.psi3 * theta.theta3) * theta.theta1 +
           (p.tau1 - 1.0) * std::log(theta.theta3) - p.psi1 * theta.theta3;

  if (variant == ModelVariant::Full) {
    if (!theta2_prior) {
      throw std::invalid_argument(
          "full-model pseudo-gamma target needs an independent gamma prior for theta2");
    }
    validate_gamma(*theta2_prior, "theta2 prior");
    if (theta.theta2 == 0.0) {
      if (theta2_prior->shape < 1.0) {
        throw std::domain_error("theta2 kernel diverges at theta2 = 0 for shape < 1");
      }
      if (theta2_prior->shape > 1.0) return kNegInf;
      // shape == 1: the prior factor is constant at theta2 = 0
    } else {
      value += (theta2_prior->shape - 1.0) * std::log(theta.theta2) -
               theta2_prior->rate * theta.theta2;
    }
  }
  return value;
}

double gamma_tail_cutoff(double shape, double rate, double eps) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("gamma_tail_cutoff: shape and rate must be positive");
  }
  double hi = shape + 1.0;
  int doublings = 0;
  while (gamma_q(shape, hi) > eps) {
    hi *= 2.0;
    if (++doublings > 200) throw ConvergenceError("gamma tail cutoff not found");
  }
  double lo = hi * 0.5;
  if (gamma_q(shape, lo) <= eps) lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_q(shape, mid) > eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi / rate;
}

MarginalPosterior MarginalPosterior::build(std::function<double(double)> log_kernel,
                                           GammaParams envelope, int parameter_id,
                                           const QuadratureOptions& options) {
  validate_gamma(envelope, "quadrature envelope");
  MarginalPosterior m;
  m.log_kernel_ = std::move(log_kernel);
  m.parameter_id_ = parameter_id;

  // Second-moment integrand still decays under the envelope with shape + 2.
  const double upper =
      gamma_tail_cutoff(envelope.shape + 2.0, envelope.rate, options.tail_mass);
  m.upper_limit_ = upper;

  // Peak scan on a log-spaced grid; the shift only guards exp() range.
  double shift = kNegInf;
  const double lo = upper * 1e-9;
  const double ratio = std::pow(upper / lo, 1.0 / static_cast<double>(options.scan_points - 1));
  double t = lo;
  for (std::size_t i = 0; i < options.scan_points; ++i, t *= ratio) {
    shift = std::max(shift, m.log_kernel_(t));
  }
  if (!std::isfinite(shift)) {
    throw std::invalid_argument("marginal kernel is nowhere finite on the quadrature domain");
  }
  m.shift_ = shift;

  auto scaled = [&m](double v) {
    const double lk = m.log_kernel_(v);
    return std::isfinite(lk) ? std::exp(lk - m.shift_) : 0.0;
  };

  QuadResult mass = integrate_adaptive(scaled, 0.0, upper, options.abs_tol, 1e-12,
                                       options.max_panels);
  if (!mass.converged || !(mass.value > 0.0)) {
    throw ConvergenceError("marginal normalisation quadrature did not converge");
  }
  QuadResult first = integrate_adaptive([&](double v) { return v * scaled(v); }, 0.0, upper,
                                        options.abs_tol * upper, 1e-12, options.max_panels);
  QuadResult second =
      integrate_adaptive([&](double v) { return v * v * scaled(v); }, 0.0, upper,
                         options.abs_tol * upper * upper, 1e-12, options.max_panels);
  if (!first.converged || !second.converged) {
    throw ConvergenceError("marginal moment quadrature did not converge");
  }

  m.scaled_mass_ = mass.value;
  m.log_normalizer_ = m.shift_ + std::log(mass.value);
  m.mean_ = first.value / mass.value;
  m.variance_ = std::max(0.0, second.value / mass.value - m.mean_ * m.mean_);
  m.panels_ = std::move(mass.panels);
  m.cumulative_.reserve(m.panels_.size());
  double acc = 0.0;
  for (const auto& p : m.panels_) {
    acc += p.integral;
    m.cumulative_.push_back(acc);
  }
  return m;
}

double MarginalPosterior::log_pdf(double t) const {
  if (!(t > 0.0)) return kNegInf;
  return log_kernel_(t) - log_normalizer_;
}

double MarginalPosterior::pdf(double t) const { return std::exp(log_pdf(t)); }

double MarginalPosterior::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= upper_limit_) return 1.0;
  auto scaled = [this](double v) {
    const double lk = log_kernel_(v);
    return std::isfinite(lk) ? std::exp(lk - shift_) : 0.0;
  };
  double acc = 0.0;
  for (std::size_t i = 0; i < panels_.size(); ++i) {
    if (t >= panels_[i].b) {
      acc = cumulative_[i];
      continue;
    }
    acc += gauss_kronrod_15(scaled, panels_[i].a, t, nullptr);
    break;
  }
  return std::min(1.0, acc / scaled_mass_);
}

double MarginalPosterior::quantile(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("marginal quantile: level must lie in (0,1)");
  }
  const double target = level * scaled_mass_;
  std::size_t idx = 0;
  while (idx + 1 < panels_.size() && cumulative_[idx] < target) ++idx;
  double lo = panels_[idx].a;
  double hi = panels_[idx].b;
  const double base = idx == 0 ? 0.0 : cumulative_[idx - 1];
  auto scaled = [this](double v) {
    const double lk = log_kernel_(v);
    return std::isfinite(lk) ? std::exp(lk - shift_) : 0.0;
  };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double mass_to_mid = base + gauss_kronrod_15(scaled, panels_[idx].a, mid, nullptr);
    if (mass_to_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-10 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

PosteriorSummary MarginalPosterior::summarize(double level) const {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("summarize: level must lie in (0,1)");
  }
  PosteriorSummary s;
  s.mean = mean_;
  s.variance = variance_;
  s.lower = quantile(0.5 * (1.0 - level));
  s.upper = quantile(0.5 * (1.0 + level));
  s.level = level;
  return s;
}

MarginalPosterior marginal_theta1(const PseudoGammaPrior& p, const SampleStats& stats,
                                  ModelVariant variant, const QuadratureOptions& options) {
  validate_pseudo_prior(p);
  if (p.psi2 != 0.0) {
    throw std::invalid_argument("quadrature marginals require the simpler prior (psi2 = 0)");
  }
  if (stats.n < 1) {
    throw std::invalid_argument("quadrature marginals require at least one observation");
  }
  const double n = static_cast<double>(stats.n);
  const double c = p.psi1 + conditional_rate_statistic(stats, variant);
  const double shape = p.tau2 + n;
  const double power = p.tau1 + n;
  const double sum_x = stats.sum_x;
  const double psi3 = p.psi3;
  const double log_gamma_term = std::lgamma(power);
  auto kernel = [=](double t1) {
    if (!(t1 > 0.0)) return kNegInf;
    return (shape - 1.0) * std::log(t1) - t1 * sum_x + log_gamma_term -
           power * std::log(c + t1 * psi3);
  };
  return MarginalPosterior::build(kernel, GammaParams{shape, sum_x}, 1, options);
}

MarginalPosterior marginal_theta3(const PseudoGammaPrior& p, const SampleStats& stats,
                                  ModelVariant variant, const QuadratureOptions& options) {
  validate_pseudo_prior(p);
  if (p.psi2 != 0.0) {
    throw std::invalid_argument("quadrature marginals require the simpler prior (psi2 = 0)");
  }
  if (stats.n < 1) {
    throw std::invalid_argument("quadrature marginals require at least one observation");
  }
  const double n = static_cast<double>(stats.n);
  const double c = p.psi1 + conditional_rate_statistic(stats, variant);
  const double shape = p.tau1 + n;
  const double power = p.tau2 + n;
  const double sum_x = stats.sum_x;
  const double psi3 = p.psi3;
  const double log_gamma_term = std::lgamma(power);
  auto kernel = [=](double t3) {
    if (!(t3 > 0.0)) return kNegInf;
    return (shape - 1.0) * std::log(t3) - t3 * c + log_gamma_term -
           power * std::log(sum_x + t3 * psi3);
  };
  return MarginalPosterior::build(kernel, GammaParams{shape, c}, 3, options);
}

}  // namespace pseudoexp
