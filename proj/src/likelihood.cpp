#include "likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pseudoexp {

FactoredLogLikelihood log_likelihood(const BivariateSample& sample,
                                     const PseudoExpParams& p, ModelVariant variant) {
  validate_params(p, variant);
  const double n = static_cast<double>(sample.size());

  FactoredLogLikelihood out;
  out.marginal_term = n * std::log(p.theta1) - p.theta1 * sample.sum_x();

  switch (variant) {
    case ModelVariant::SubModelI:
      // sum log(t3 (1+x_i)) - t3 (Sy + Sxy)
      out.conditional_term = n * std::log(p.theta3) + sample.sum_log1p_x() -
                             p.theta3 * (sample.sum_y() + sample.sum_xy());
      break;
    case ModelVariant::SubModelII:
      out.conditional_term = n * std::log(p.theta3) + sample.sum_log_x() -
                             p.theta3 * sample.sum_xy();
      break;
    case ModelVariant::Full: {
      double sum_log = 0.0;
      for (std::size_t i = 0; i < sample.size(); ++i) {
        const double rate = p.theta2 + p.theta3 * sample.x(i);
        if (!(rate > 0.0)) {
          throw std::domain_error("log_likelihood: theta2 + theta3*x_i vanishes");
        }
        sum_log += std::log(rate);
      }
      out.conditional_term =
          sum_log - p.theta2 * sample.sum_y() - p.theta3 * sample.sum_xy();
      break;
    }
  }
  return out;
}

double conditional_term_value(const BivariateSample& sample, double theta2, double theta3) {
  double sum_log = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double rate = theta2 + theta3 * sample.x(i);
    if (!(rate > 0.0)) return -std::numeric_limits<double>::infinity();
    sum_log += std::log(rate);
  }
  return sum_log - theta2 * sample.sum_y() - theta3 * sample.sum_xy();
}

std::array<double, 2> conditional_term_gradient(const BivariateSample& sample,
                                                double theta2, double theta3) {
  double g2 = -sample.sum_y();
  double g3 = -sample.sum_xy();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double inv = 1.0 / (theta2 + theta3 * sample.x(i));
    g2 += inv;
    g3 += sample.x(i) * inv;
  }
  return {g2, g3};
}

namespace {

std::array<double, 3> conditional_term_hessian(const BivariateSample& sample,
                                               double theta2, double theta3) {
  double h22 = 0.0, h23 = 0.0, h33 = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = sample.x(i);
    const double inv = 1.0 / (theta2 + theta3 * x);
    const double inv2 = inv * inv;
    h22 -= inv2;
    h23 -= x * inv2;
    h33 -= x * x * inv2;
  }
  return {h22, h23, h33};
}

MleResult closed_form(const BivariateSample& sample, const PseudoExpParams& params,
                      ModelVariant variant) {
  MleResult r;
  r.params = params;
  r.loglik_at_max = log_likelihood(sample, params, variant).total();
  r.converged = true;
  r.iterations = 0;
  r.on_boundary = false;
  return r;
}

}  // namespace

MleResult mle_submodel1(const BivariateSample& sample) {
  const double n = static_cast<double>(sample.size());
  return closed_form(
      sample,
      PseudoExpParams::sub_model_1(n / sample.sum_x(),
                                   n / (sample.sum_y() + sample.sum_xy())),
      ModelVariant::SubModelI);
}

MleResult mle_submodel2(const BivariateSample& sample) {
  const double n = static_cast<double>(sample.size());
  return closed_form(sample,
                     PseudoExpParams::sub_model_2(n / sample.sum_x(), n / sample.sum_xy()),
                     ModelVariant::SubModelII);
}

MleResult mle_full(const BivariateSample& sample, double tol, int max_iter) {
  const double n = static_cast<double>(sample.size());
  const double sy = sample.sum_y();
  const double sxy = sample.sum_xy();

  // Projected Newton from an interior point.
  double t2 = 0.5 * n / sy;
  double t3 = 0.5 * n / sxy;
  double value = conditional_term_value(sample, t2, t3);
  int iter = 0;
  bool converged = false;

  for (; iter < max_iter; ++iter) {
    const auto grad = conditional_term_gradient(sample, t2, t3);
    // At an active bound only an inward gradient counts.
    const double pg2 = (t2 > 0.0 || grad[0] > 0.0) ? grad[0] : 0.0;
    const double pg3 = (t3 > 0.0 || grad[1] > 0.0) ? grad[1] : 0.0;
    if (std::max(std::fabs(pg2), std::fabs(pg3)) < tol) {
      converged = true;
      break;
    }

    const auto h = conditional_term_hessian(sample, t2, t3);
    const bool free2 = t2 > 0.0 || grad[0] > 0.0;
    const bool free3 = t3 > 0.0 || grad[1] > 0.0;
    double d2 = 0.0, d3 = 0.0;
    if (free2 && free3) {
      const double det = h[0] * h[2] - h[1] * h[1];
      if (std::fabs(det) > 1e-300) {
        d2 = -(h[2] * grad[0] - h[1] * grad[1]) / det;
        d3 = -(h[0] * grad[1] - h[1] * grad[0]) / det;
      }
    } else if (free2) {
      d2 = -grad[0] / h[0];
    } else if (free3) {
      d3 = -grad[1] / h[2];
    }
    if (d2 * pg2 + d3 * pg3 <= 0.0) {
      // Newton direction unusable (singular or non-ascent); fall back to the
      // projected gradient scaled to the current point's magnitude.
      const double norm = std::hypot(pg2, pg3);
      const double scale = (1.0 + t2 + t3) / (1.0 + norm);
      d2 = pg2 * scale;
      d3 = pg3 * scale;
    }

    double step = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const double c2 = std::max(0.0, t2 + step * d2);
      const double c3 = std::max(0.0, t3 + step * d3);
      if (c2 + c3 > 0.0) {
        const double cv = conditional_term_value(sample, c2, c3);
        const double predicted = grad[0] * (c2 - t2) + grad[1] * (c3 - t3);
        if (cv >= value + 1e-4 * predicted && cv > -std::numeric_limits<double>::infinity()) {
          t2 = c2;
          t3 = c3;
          value = cv;
          improved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }

  // The two boundary faces have closed-form maximisers; take whichever
  // candidate wins. KKT at a face: the inward gradient must be nonpositive.
  struct Candidate {
    double t2, t3, value;
    bool converged;
  };
  Candidate best{t2, t3, value, converged};
  {
    const double f2 = n / sy;  // theta3 = 0 face
    const double fv = conditional_term_value(sample, f2, 0.0);
    if (fv >= best.value) {
      const auto g = conditional_term_gradient(sample, f2, 0.0);
      best = {f2, 0.0, fv, g[1] <= tol};
    }
  }
  {
    const double f3 = n / sxy;  // theta2 = 0 face
    const double fv = conditional_term_value(sample, 0.0, f3);
    if (fv >= best.value) {
      const auto g = conditional_term_gradient(sample, 0.0, f3);
      best = {0.0, f3, fv, g[0] <= tol};
    }
  }

  MleResult r;
  r.params = PseudoExpParams::full(n / sample.sum_x(), best.t2, best.t3);
  r.loglik_at_max = (n * std::log(r.params.theta1) - r.params.theta1 * sample.sum_x()) +
                    best.value;
  r.converged = best.converged;
  r.iterations = iter;
  r.on_boundary = best.t2 == 0.0 || best.t3 == 0.0;
  return r;
}

MleResult mle(const BivariateSample& sample, ModelVariant variant) {
  switch (variant) {
    case ModelVariant::SubModelI: return mle_submodel1(sample);
    case ModelVariant::SubModelII: return mle_submodel2(sample);
    case ModelVariant::Full: return mle_full(sample);
  }
  throw std::invalid_argument("mle: unknown variant");
}

}  // namespace pseudoexp
