#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>

#include "quadrature.hpp"
#include "sample.hpp"
#include "types.hpp"

namespace pseudoexp {

// Dependent prior on (theta1, theta3): theta3 ~ Gamma(tau1, psi1) and
// theta1 | theta3 ~ Gamma(tau2, psi2 + psi3*theta3). psi2 = 0 selects the
// simpler prior for which closed marginal posterior kernels exist.
struct PseudoGammaPrior {
  double tau1 = 1.0;
  double tau2 = 1.0;
  double psi1 = 1.0;
  double psi2 = 0.0;
  double psi3 = 1.0;
};

void validate_pseudo_prior(const PseudoGammaPrior& prior);

// Joint prior log-kernel, including the (psi2 + psi3*theta3)^{tau2}
// normalising factor of the conditional gamma slice.
double prior_log_kernel(const PseudoGammaPrior& prior, double theta1, double theta3);

// Joint posterior log-kernel for the simpler prior (psi2 = 0) on a sub-model:
//   (tau2+n-1) log t1 - t1 (Sx + psi3 t3) + (tau1+n-1) log t3 - t3 C,
// with C = psi1 + Sy + Sxy (sub-model I) or psi1 + Sxy (sub-model II).
// The conditional slice's theta3-dependent normaliser is dropped, matching the
// marginal kernels below; see the project README for the convention note.
double posterior_log_kernel(const PseudoGammaPrior& prior, const SampleStats& stats,
                            ModelVariant variant, double theta1, double theta3);

// Pseudo-prior posterior log-kernel for any psi2 and any variant, suitable as
// a hit-and-run target. Sub-models use (theta1, theta3); the full model adds
// an independent Gamma(theta2_prior) factor on theta2 and the full likelihood.
// At psi2 = 0 on a sub-model this matches posterior_log_kernel up to an
// additive constant (the likelihood's data-only terms).
double general_posterior_log_kernel(const PseudoGammaPrior& prior,
                                    const std::optional<GammaParams>& theta2_prior,
                                    const BivariateSample& sample, ModelVariant variant,
                                    const PseudoExpParams& theta);

struct QuadratureOptions {
  double abs_tol = 1e-10;        // on the peak-scaled integrand
  double tail_mass = 1e-13;      // gamma-envelope mass allowed beyond the cutoff
  std::size_t max_panels = 4096;
  std::size_t scan_points = 1024;  // grid used to locate the kernel peak
};

// Normalised one-dimensional posterior marginal obtained by adaptive
// quadrature of an unnormalised log-kernel on (0, T). Immutable once built.
class MarginalPosterior {
 public:
  static MarginalPosterior build(std::function<double(double)> log_kernel,
                                 GammaParams envelope, int parameter_id,
                                 const QuadratureOptions& options = {});

  int parameter_id() const { return parameter_id_; }
  double log_normalizer() const { return log_normalizer_; }
  double normalizer() const { return std::exp(log_normalizer_); }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double upper_limit() const { return upper_limit_; }

  double log_pdf(double t) const;
  double pdf(double t) const;
  double cdf(double t) const;
  double quantile(double level) const;
  PosteriorSummary summarize(double level) const;

 private:
  MarginalPosterior() = default;

  std::function<double(double)> log_kernel_;
  int parameter_id_ = 0;
  double shift_ = 0.0;          // max log-kernel, subtracted before exponentiating
  double scaled_mass_ = 1.0;    // integral of exp(log_kernel - shift)
  double log_normalizer_ = 0.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
  double upper_limit_ = 0.0;
  std::vector<QuadPanel> panels_;     // converged panels of the mass integral
  std::vector<double> cumulative_;    // prefix masses at panel right edges
};

// Marginal posterior kernels for the simpler prior (psi2 = 0):
//   theta1: t1^{tau2+n-1} e^{-t1 Sx} * Gamma(tau1+n) / (C + t1 psi3)^{tau1+n}
//   theta3: t3^{tau1+n-1} e^{-t3 C}  * Gamma(tau2+n) / (Sx + t3 psi3)^{tau2+n}
MarginalPosterior marginal_theta1(const PseudoGammaPrior& prior, const SampleStats& stats,
                                  ModelVariant variant, const QuadratureOptions& options = {});
MarginalPosterior marginal_theta3(const PseudoGammaPrior& prior, const SampleStats& stats,
                                  ModelVariant variant, const QuadratureOptions& options = {});

// Smallest T with Gamma(shape, rate) upper-tail mass <= eps beyond T.
double gamma_tail_cutoff(double shape, double rate, double eps);

}  // namespace pseudoexp
