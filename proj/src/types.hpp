#pragma once

#include <stdexcept>
#include <string>

namespace pseudoexp {

// Which constraint is imposed on the parameter triple (theta1, theta2, theta3):
// Full leaves all three free, SubModelI forces theta2 == theta3, SubModelII
// forces theta2 == 0.
enum class ModelVariant { Full, SubModelI, SubModelII };

inline const char* variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Full: return "full";
    case ModelVariant::SubModelI: return "sub1";
    case ModelVariant::SubModelII: return "sub2";
  }
  return "?";
}

// Rates of the bivariate pseudo-exponential law: X ~ Exp(theta1) and
// Y | X = x ~ Exp(theta2 + theta3 x).
struct PseudoExpParams {
  double theta1 = 1.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  static PseudoExpParams full(double t1, double t2, double t3) { return {t1, t2, t3}; }
  static PseudoExpParams sub_model_1(double t1, double t3) { return {t1, t3, t3}; }
  static PseudoExpParams sub_model_2(double t1, double t3) { return {t1, 0.0, t3}; }
};

// Shape/rate parameterisation throughout: pdf(x) ∝ x^{shape-1} e^{-rate x}.
struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

// Pareto of the second kind: pdf(t) = shape * scale^shape / (scale+t)^{shape+1}
// on t >= 0. Arises as the gamma-mixed exponential posterior predictive.
struct LomaxParams {
  double shape = 1.0;
  double scale = 1.0;
};

struct PosteriorSummary {
  double mean = 0.0;
  double variance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
};

// Parameter set violates the requested model variant.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Improper-prior posterior would itself be improper for the given data.
class ProprietyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative routine exhausted its budget before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset contents violate the input contract (nonpositive entries, bad rows).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void validate_params(const PseudoExpParams& p, ModelVariant v) {
  if (!(p.theta1 > 0.0)) {
    throw ConstraintError("theta1 must be positive");
  }
  if (p.theta2 < 0.0 || p.theta3 < 0.0) {
    throw ConstraintError("theta2 and theta3 must be nonnegative");
  }
  if (!(p.theta2 + p.theta3 > 0.0)) {
    throw ConstraintError("theta2 + theta3 must be positive");
  }
  switch (v) {
    case ModelVariant::Full:
      break;
    case ModelVariant::SubModelI:
      if (p.theta2 != p.theta3) {
        throw ConstraintError("sub-model I requires theta2 == theta3");
      }
      break;
    case ModelVariant::SubModelII:
      if (p.theta2 != 0.0) {
        throw ConstraintError("sub-model II requires theta2 == 0");
      }
      break;
  }
}

inline void validate_gamma(const GammaParams& g, const char* what) {
  if (!(g.shape > 0.0) || !(g.rate > 0.0)) {
    throw std::invalid_argument(std::string(what) + ": shape and rate must be positive");
  }
}

}  // namespace pseudoexp
