#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "quadrature.hpp"

namespace testutil {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Kolmogorov-Smirnov distance of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> draws,
                           const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  return d;
}

inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

// Iterated adaptive quadrature over a rectangle; test-side oracle.
inline double integrate_2d(const std::function<double(double, double)>& f, double ax,
                           double bx, double ay, double by, double tol) {
  auto outer = [&](double x) {
    return pseudoexp::integrate_adaptive([&](double y) { return f(x, y); }, ay, by,
                                         tol * 1e-3, 1e-12, 2048)
        .value;
  };
  return pseudoexp::integrate_adaptive(outer, ax, bx, tol, 1e-12, 2048).value;
}

}  // namespace testutil
