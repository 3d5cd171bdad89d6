#pragma once

namespace pseudoexp {

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
// Series expansion for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Inverse of P(shape, rate*x) = p, solved by bracketed bisection. Accurate to
// the precision of gamma_p itself; throws ConvergenceError if the bracket
// cannot be established (does not happen for p in [1e-9, 1-1e-9]).
double gamma_quantile_standard(double shape, double p);

}  // namespace pseudoexp
