#pragma once

#include <array>

#include "sample.hpp"
#include "types.hpp"

namespace pseudoexp {

// The likelihood splits into a factor involving only theta1 and a factor
// involving only (theta2, theta3); their logs are kept separate.
struct FactoredLogLikelihood {
  double marginal_term = 0.0;     // n log t1 - t1 * sum(x)
  double conditional_term = 0.0;  // sum log(t2 + t3 x_i) - t2 sum(y) - t3 sum(xy)
  double total() const { return marginal_term + conditional_term; }
};

FactoredLogLikelihood log_likelihood(const BivariateSample& sample,
                                     const PseudoExpParams& params, ModelVariant variant);

struct MleResult {
  PseudoExpParams params;
  double loglik_at_max = 0.0;
  bool converged = false;
  int iterations = 0;
  bool on_boundary = false;
};

// Closed forms: theta1 = n/Sx with theta3 = n/(Sy+Sxy) (I) or n/Sxy (II).
MleResult mle_submodel1(const BivariateSample& sample);
MleResult mle_submodel2(const BivariateSample& sample);

// theta1 = n/Sx exactly; (theta2, theta3) maximises the concave conditional
// term over the nonnegative quadrant by projected Newton with backtracking.
// Boundary maximisers are legitimate results, reported via on_boundary.
MleResult mle_full(const BivariateSample& sample, double tol = 1e-8, int max_iter = 200);

MleResult mle(const BivariateSample& sample, ModelVariant variant);

// Conditional-term value/gradient in the full-model parameterisation; used by
// mle_full and exposed for the finite-difference checks.
double conditional_term_value(const BivariateSample& sample, double theta2, double theta3);
std::array<double, 2> conditional_term_gradient(const BivariateSample& sample,
                                                double theta2, double theta3);

}  // namespace pseudoexp
