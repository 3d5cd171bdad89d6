#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conjugate.hpp"
#include "harm.hpp"
#include "likelihood.hpp"
#include "pseudo_gamma.hpp"

namespace pseudoexp {

enum class FitMethod { Analytic, Quadrature, Harm };

inline const char* method_name(FitMethod m) {
  switch (m) {
    case FitMethod::Analytic: return "analytic";
    case FitMethod::Quadrature: return "quadrature";
    case FitMethod::Harm: return "harm";
  }
  return "?";
}

// One of the three prior families the CLI exposes. For the pseudo-gamma prior
// on the full model an independent gamma prior on theta2 is required.
struct PriorChoice {
  enum class Kind { IndependentGamma, Improper, PseudoGamma };
  Kind kind = Kind::IndependentGamma;
  GammaParams theta1{1.0, 1.0};
  GammaParams theta2{1.0, 1.0};
  GammaParams theta3{1.0, 1.0};
  bool has_theta2 = false;  // theta2 hyper-parameters were supplied
  PseudoGammaPrior pseudo{};

  PriorSpec to_prior_spec() const;
  const char* kind_name() const;
};

struct ChainOptions {
  std::uint64_t seed = 0;
  std::size_t kept = 10000;
  std::size_t thinning = 10;
  std::size_t burn_in = 10000;
};

struct ParamReport {
  std::string name;
  PosteriorSummary summary;
  double ess = std::numeric_limits<double>::quiet_NaN();  // NaN: exact, not sampled
};

struct FitResult {
  ModelVariant variant = ModelVariant::SubModelI;
  FitMethod method = FitMethod::Analytic;
  std::vector<ParamReport> params;  // theta1 [, theta2], theta3
  MleResult mle;
  std::optional<LomaxParams> predictive_x;
  std::optional<LomaxParams> predictive_y;
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
  ChainOptions chain;
  double level = 0.95;
  bool used_chain = false;
};

// Checks (prior, variant, method) compatibility; throws ConstraintError when
// the combination has no defined posterior path.
void check_method(ModelVariant variant, const PriorChoice& prior, FitMethod method);

// Picks the natural method: analytic for conjugate cases, quadrature for the
// simpler pseudo prior on a sub-model, hit-and-run otherwise.
FitMethod default_method(ModelVariant variant, const PriorChoice& prior);

FitResult fit_model(const BivariateSample& sample, ModelVariant variant,
                    const PriorChoice& prior, FitMethod method, const ChainOptions& chain,
                    double level = 0.95);

}  // namespace pseudoexp
