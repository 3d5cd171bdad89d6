#pragma once

#include <cstddef>

#include "rng.hpp"
#include "sample.hpp"
#include "types.hpp"

namespace pseudoexp {

// ---- bivariate pseudo-exponential -----------------------------------------

// log f(x,y) = log t1 - t1 x + log(t2 + t3 x) - (t2 + t3 x) y.
// Throws on nonpositive (x,y) or params violating the variant.
double joint_logpdf(const PseudoExpParams& params, ModelVariant variant, double x, double y);
double joint_pdf(const PseudoExpParams& params, ModelVariant variant, double x, double y);

// Two-step composition: x ~ Exp(theta1), then y | x ~ Exp(theta2 + theta3 x).
BivariateSample sample_bivariate(const PseudoExpParams& params, ModelVariant variant,
                                 std::size_t n, Rng& rng);

// ---- helper distributions ---------------------------------------------------

double exponential_sample(double rate, Rng& rng);

double gamma_logpdf(const GammaParams& g, double x);
double gamma_pdf(const GammaParams& g, double x);
double gamma_cdf(const GammaParams& g, double x);
double gamma_quantile(const GammaParams& g, double level);
double gamma_sample(const GammaParams& g, Rng& rng);

double lomax_logpdf(const LomaxParams& l, double t);
double lomax_pdf(const LomaxParams& l, double t);
double lomax_cdf(const LomaxParams& l, double t);
double lomax_quantile(const LomaxParams& l, double level);
double lomax_mean(const LomaxParams& l);      // requires shape > 1
double lomax_variance(const LomaxParams& l);  // requires shape > 2

}  // namespace pseudoexp
