#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pseudoexp {

// One converged subinterval of an adaptive integration, with its contribution.
struct QuadPanel {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
  std::vector<QuadPanel> panels;  // sorted by left endpoint
};

// 15-point Kronrod / 7-point Gauss pair on [a,b]; *err receives |K15 - G7|.
double gauss_kronrod_15(const std::function<double(double)>& f, double a, double b,
                        double* err);

// Adaptive bisection driven by the worst-panel error until the summed error
// estimate drops below max(abs_tol, rel_tol*|value|) or the panel budget is
// exhausted (converged=false in that case).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, std::size_t max_panels);

}  // namespace pseudoexp
