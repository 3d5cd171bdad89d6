#include "special_functions.hpp"

#include <cmath>
#include <stdexcept>

#include "types.hpp"

namespace pseudoexp {

namespace {

constexpr int kMaxIterations = 2000;
constexpr double kEps = 1e-16;

// log of the prefactor x^a e^{-x} / Gamma(a)
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double lower_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, x));
    }
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

double upper_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) {
      return std::exp(log_prefactor(a, x)) * h;
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: shape must be positive");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: shape must be positive");
  if (x < 0.0) throw std::domain_error("gamma_q: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_cf(a, x);
}

double gamma_quantile_standard(double shape, double p) {
  if (!(shape > 0.0)) throw std::domain_error("gamma quantile: shape must be positive");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("gamma quantile: level must lie in (0,1)");
  }

  double hi = shape + 1.0;
  int doublings = 0;
  while (gamma_p(shape, hi) < p) {
    hi *= 2.0;
    if (++doublings > 400) {
      throw ConvergenceError("gamma quantile: bracket not found");
    }
  }
  double lo = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted
    if (gamma_p(shape, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pseudoexp
