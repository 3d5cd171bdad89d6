#pragma once

#include "distributions.hpp"
#include "sample.hpp"
#include "types.hpp"

namespace pseudoexp {

// Prior over the parameter triple. Improper is the alpha = beta = 0 limit of
// every gamma component, kept as its own case so propriety checks are explicit.
struct PriorSpec {
  enum class Kind { IndependentGamma, Improper };
  Kind kind = Kind::IndependentGamma;
  GammaParams theta1{1.0, 1.0};
  GammaParams theta2{1.0, 1.0};  // full model only
  GammaParams theta3{1.0, 1.0};

  static PriorSpec independent(GammaParams t1, GammaParams t3) {
    PriorSpec s;
    s.theta1 = t1;
    s.theta3 = t3;
    return s;
  }
  static PriorSpec independent_full(GammaParams t1, GammaParams t2, GammaParams t3) {
    PriorSpec s;
    s.theta1 = t1;
    s.theta2 = t2;
    s.theta3 = t3;
    return s;
  }
  static PriorSpec improper() {
    PriorSpec s;
    s.kind = Kind::Improper;
    s.theta1 = s.theta2 = s.theta3 = GammaParams{0.0, 0.0};
    return s;
  }
  // Effective gamma hyper-parameters (zeros under Improper).
  GammaParams effective(int parameter_id) const;
};

struct GammaPosterior {
  double shape = 1.0;
  double rate = 1.0;
  int parameter_id = 0;  // which theta this posterior describes

  GammaParams params() const { return {shape, rate}; }
  double mean() const { return shape / rate; }
  double variance() const { return shape / (rate * rate); }
};

// Exact updates. Statistics overloads accept n = 0 (no-data identity); the
// Improper prior then raises ProprietyError.
GammaPosterior posterior_theta1(const PriorSpec& prior, const SampleStats& stats);
GammaPosterior posterior_theta1(const PriorSpec& prior, const BivariateSample& sample);
GammaPosterior posterior_theta3_sub1(const PriorSpec& prior, const SampleStats& stats);
GammaPosterior posterior_theta3_sub1(const PriorSpec& prior, const BivariateSample& sample);
GammaPosterior posterior_theta3_sub2(const PriorSpec& prior, const SampleStats& stats);
GammaPosterior posterior_theta3_sub2(const PriorSpec& prior, const BivariateSample& sample);

// Log-kernel of the full-model (theta2, theta3) posterior block, up to an
// additive constant. Returns -inf where the kernel vanishes; throws
// std::domain_error where it diverges (theta_j = 0 with alpha_j < 1).
double full_model_theta23_log_kernel(const PriorSpec& prior, const BivariateSample& sample,
                                     double theta2, double theta3);

// Posterior predictive: a Gamma(shape, rate) mixing law over an exponential
// rate yields a Lomax(shape, rate) observation law.
LomaxParams posterior_predictive(const GammaPosterior& posterior);

PosteriorSummary summarize(const GammaPosterior& posterior, double level);

}  // namespace pseudoexp
