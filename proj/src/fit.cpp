#include "fit.hpp"

#include <cmath>

#include "distributions.hpp"

namespace pseudoexp {

PriorSpec PriorChoice::to_prior_spec() const {
  switch (kind) {
    case Kind::IndependentGamma:
      return PriorSpec::independent_full(theta1, theta2, theta3);
    case Kind::Improper:
      return PriorSpec::improper();
    case Kind::PseudoGamma:
      break;
  }
  throw ConstraintError("pseudo-gamma prior has no conjugate representation");
}

const char* PriorChoice::kind_name() const {
  switch (kind) {
    case Kind::IndependentGamma: return "independent";
    case Kind::Improper: return "improper";
    case Kind::PseudoGamma: return "pseudo";
  }
  return "?";
}

FitMethod default_method(ModelVariant variant, const PriorChoice& prior) {
  if (prior.kind != PriorChoice::Kind::PseudoGamma) {
    return variant == ModelVariant::Full ? FitMethod::Harm : FitMethod::Analytic;
  }
  if (prior.pseudo.psi2 == 0.0 && variant != ModelVariant::Full) {
    return FitMethod::Quadrature;
  }
  return FitMethod::Harm;
}

void check_method(ModelVariant variant, const PriorChoice& prior, FitMethod method) {
  if (prior.kind == PriorChoice::Kind::PseudoGamma) {
    validate_pseudo_prior(prior.pseudo);
    if (variant == ModelVariant::Full && !prior.has_theta2) {
      throw ConstraintError(
          "full-model pseudo prior needs theta2 hyper-parameters (alpha2, beta2)");
    }
  }
  switch (method) {
    case FitMethod::Analytic:
      if (prior.kind == PriorChoice::Kind::PseudoGamma) {
        throw ConstraintError("analytic method requires an independent or improper prior");
      }
      if (variant == ModelVariant::Full) {
        throw ConstraintError(
            "analytic method is unavailable for the full model: (theta2, theta3) have no "
            "closed-form posterior");
      }
      break;
    case FitMethod::Quadrature:
      if (prior.kind != PriorChoice::Kind::PseudoGamma || prior.pseudo.psi2 != 0.0) {
        throw ConstraintError("quadrature method requires the pseudo prior with psi2 = 0");
      }
      if (variant == ModelVariant::Full) {
        throw ConstraintError("quadrature marginals are defined for the sub-models only");
      }
      break;
    case FitMethod::Harm:
      break;
  }
}

namespace {

ParamReport report(const std::string& name, const PosteriorSummary& summary,
                   double ess = std::numeric_limits<double>::quiet_NaN()) {
  ParamReport r;
  r.name = name;
  r.summary = summary;
  r.ess = ess;
  return r;
}

ChainConfig make_chain_config(const ChainOptions& opts, std::vector<double> initial) {
  ChainConfig cfg;
  cfg.iterations = opts.kept * opts.thinning;
  cfg.burn_in = opts.burn_in;
  cfg.thinning = opts.thinning;
  cfg.seed = opts.seed;
  cfg.step_scale.resize(initial.size());
  for (std::size_t i = 0; i < initial.size(); ++i) {
    cfg.step_scale[i] = std::max(initial[i], 1e-8);
  }
  cfg.initial_point = std::move(initial);
  return cfg;
}

double positive_or(double v, double fallback) { return v > 0.0 ? v : fallback; }

}  // namespace

FitResult fit_model(const BivariateSample& sample, ModelVariant variant,
                    const PriorChoice& prior, FitMethod method, const ChainOptions& chain,
                    double level) {
  check_method(variant, prior, method);
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("fit_model: level must lie in (0,1)");
  }

  FitResult result;
  result.variant = variant;
  result.method = method;
  result.chain = chain;
  result.level = level;
  result.mle = mle(sample, variant);

  const SampleStats stats = sample.stats();

  // Conjugate blocks exist whenever the prior is gamma or its improper limit.
  std::optional<GammaPosterior> post1, post3;
  if (prior.kind != PriorChoice::Kind::PseudoGamma) {
    const PriorSpec spec = prior.to_prior_spec();
    post1 = posterior_theta1(spec, stats);
    if (variant == ModelVariant::SubModelI) {
      post3 = posterior_theta3_sub1(spec, stats);
    } else if (variant == ModelVariant::SubModelII) {
      post3 = posterior_theta3_sub2(spec, stats);
    }
    // Predictive laws are reported for the fully conjugate sub-model fits only.
    if (variant != ModelVariant::Full) {
      result.predictive_x = posterior_predictive(*post1);
      result.predictive_y = posterior_predictive(*post3);
    }
  }

  switch (method) {
    case FitMethod::Analytic: {
      result.params.push_back(report("theta1", summarize(*post1, level)));
      result.params.push_back(report("theta3", summarize(*post3, level)));
      break;
    }
    case FitMethod::Quadrature: {
      const MarginalPosterior m1 = marginal_theta1(prior.pseudo, stats, variant);
      const MarginalPosterior m3 = marginal_theta3(prior.pseudo, stats, variant);
      result.params.push_back(report("theta1", m1.summarize(level)));
      result.params.push_back(report("theta3", m3.summarize(level)));
      break;
    }
    case FitMethod::Harm: {
      result.used_chain = true;
      if (variant != ModelVariant::Full) {
        // 2-D chain over (theta1, theta3)
        LogTarget target;
        target.dimension = 2;
        if (prior.kind == PriorChoice::Kind::PseudoGamma) {
          const PseudoGammaPrior pg = prior.pseudo;
          target.log_density = [pg, &sample, variant](std::span<const double> t) {
            const PseudoExpParams params = variant == ModelVariant::SubModelI
                                               ? PseudoExpParams::sub_model_1(t[0], t[1])
                                               : PseudoExpParams::sub_model_2(t[0], t[1]);
            return general_posterior_log_kernel(pg, std::nullopt, sample, variant, params);
          };
        } else {
          const GammaPosterior p1 = *post1;
          const GammaPosterior p3 = *post3;
          target.log_density = [p1, p3](std::span<const double> t) {
            return (p1.shape - 1.0) * std::log(t[0]) - p1.rate * t[0] +
                   (p3.shape - 1.0) * std::log(t[1]) - p3.rate * t[1];
          };
        }
        std::vector<double> initial{positive_or(result.mle.params.theta1, 1.0),
                                    positive_or(result.mle.params.theta3, 1.0)};
        const ChainResult cr = run_chain(target, make_chain_config(chain, std::move(initial)));
        const auto summaries = summarize_chain(cr, level);
        result.params.push_back(report("theta1", summaries[0], cr.ess[0]));
        result.params.push_back(report("theta3", summaries[1], cr.ess[1]));
        result.acceptance_rate = cr.acceptance_rate;
      } else if (prior.kind != PriorChoice::Kind::PseudoGamma) {
        // theta1 block is exactly conjugate; sample (theta2, theta3) only.
        const PriorSpec spec = prior.to_prior_spec();
        LogTarget target;
        target.dimension = 2;
        target.log_density = [&spec, &sample](std::span<const double> t) {
          return full_model_theta23_log_kernel(spec, sample, t[0], t[1]);
        };
        std::vector<double> initial{
            std::max(result.mle.params.theta2, 1e-2),
            std::max(result.mle.params.theta3, 1e-2)};
        const ChainResult cr = run_chain(target, make_chain_config(chain, std::move(initial)));
        const auto summaries = summarize_chain(cr, level);
        result.params.push_back(report("theta1", summarize(*post1, level)));
        result.params.push_back(report("theta2", summaries[0], cr.ess[0]));
        result.params.push_back(report("theta3", summaries[1], cr.ess[1]));
        result.acceptance_rate = cr.acceptance_rate;
      } else {
        // full model with the pseudo prior: 3-D chain over (theta1, theta2, theta3)
        const PseudoGammaPrior pg = prior.pseudo;
        const GammaParams g2 = prior.theta2;
        LogTarget target;
        target.dimension = 3;
        target.log_density = [pg, g2, &sample](std::span<const double> t) {
          return general_posterior_log_kernel(pg, g2, sample, ModelVariant::Full,
                                              PseudoExpParams::full(t[0], t[1], t[2]));
        };
        std::vector<double> initial{positive_or(result.mle.params.theta1, 1.0),
                                    std::max(result.mle.params.theta2, 1e-2),
                                    std::max(result.mle.params.theta3, 1e-2)};
        const ChainResult cr = run_chain(target, make_chain_config(chain, std::move(initial)));
        const auto summaries = summarize_chain(cr, level);
        result.params.push_back(report("theta1", summaries[0], cr.ess[0]));
        result.params.push_back(report("theta2", summaries[1], cr.ess[1]));
        result.params.push_back(report("theta3", summaries[2], cr.ess[2]));
        result.acceptance_rate = cr.acceptance_rate;
      }
      break;
    }
  }
  return result;
}

}  // namespace pseudoexp
