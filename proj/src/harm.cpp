#include "harm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pseudoexp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_target_and_point(const LogTarget& target, const std::vector<double>& point) {
  if (target.dimension < 1 || !target.log_density) {
    throw std::invalid_argument("harm: target needs a dimension and a log density");
  }
  if (point.size() != target.dimension) {
    throw std::invalid_argument("harm: initial point dimension mismatch");
  }
  for (double v : point) {
    if (!(v > 0.0)) throw std::invalid_argument("harm: initial point must be strictly positive");
  }
}

}  // namespace

std::vector<double> unit_direction(std::size_t dimension, Rng& rng) {
  std::vector<double> d(dimension);
  for (;;) {
    double norm2 = 0.0;
    for (auto& v : d) {
      v = rng.normal();
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& v : d) v *= inv;
      return d;
    }
  }
}

namespace {

// Core move given the cached current log-density; returns the proposal's
// log-density when accepted so the caller never re-evaluates the target.
bool step_in_place(std::vector<double>& current, double& current_logp,
                   const LogTarget& target, std::span<const double> step_scale,
                   double multiplier, Rng& rng, std::vector<double>& proposal) {
  const std::size_t dim = target.dimension;
  const std::vector<double> direction = unit_direction(dim, rng);
  const double step = rng.normal();

  bool feasible = true;
  for (std::size_t i = 0; i < dim; ++i) {
    proposal[i] = current[i] + step * multiplier * step_scale[i] * direction[i];
    if (!(proposal[i] > 0.0)) feasible = false;
  }
  if (!feasible) return false;

  const double logp = target.log_density(proposal);
  if (logp == kNegInf || std::isnan(logp)) return false;

  const double delta = logp - current_logp;
  if (delta >= 0.0 || rng.uniform() < std::exp(delta)) {
    current.swap(proposal);
    current_logp = logp;
    return true;
  }
  return false;
}

}  // namespace

std::pair<std::vector<double>, bool> harm_step(std::span<const double> current,
                                               const LogTarget& target,
                                               std::span<const double> step_scale, Rng& rng) {
  std::vector<double> point(current.begin(), current.end());
  validate_target_and_point(target, point);
  if (step_scale.size() != target.dimension) {
    throw std::invalid_argument("harm_step: step scale dimension mismatch");
  }
  double logp = target.log_density(point);
  if (!std::isfinite(logp)) {
    throw std::invalid_argument("harm_step: target is not finite at the current point");
  }
  std::vector<double> proposal(target.dimension);
  const bool accepted = step_in_place(point, logp, target, step_scale, 1.0, rng, proposal);
  return {std::move(point), accepted};
}

ChainResult run_chain(const LogTarget& target, const ChainConfig& config) {
  std::vector<double> current = config.initial_point;
  validate_target_and_point(target, current);
  if (config.thinning < 1 || config.iterations < config.thinning) {
    throw std::invalid_argument("run_chain: iterations must be at least thinning");
  }

  std::vector<double> scale = config.step_scale;
  if (scale.empty()) {
    scale.resize(target.dimension);
    for (std::size_t i = 0; i < target.dimension; ++i) {
      scale[i] = std::max(0.5 * current[i], 0.05);
    }
  }
  if (scale.size() != target.dimension) {
    throw std::invalid_argument("run_chain: step scale dimension mismatch");
  }
  for (double s : scale) {
    if (!(s > 0.0)) throw std::invalid_argument("run_chain: step scales must be positive");
  }

  Rng rng(config.seed);
  double current_logp = target.log_density(current);
  if (!std::isfinite(current_logp)) {
    throw std::invalid_argument("run_chain: target is not finite at the initial point");
  }

  std::vector<double> proposal(target.dimension);
  double log_multiplier = 0.0;

  for (std::size_t t = 1; t <= config.burn_in; ++t) {
    const bool accepted = step_in_place(current, current_logp, target, scale,
                                        std::exp(log_multiplier), rng, proposal);
    if (config.adapt) {
      const double gain = 1.0 / std::pow(static_cast<double>(t), 0.6);
      log_multiplier += gain * ((accepted ? 1.0 : 0.0) - config.target_acceptance);
      log_multiplier = std::clamp(log_multiplier, -20.0, 20.0);
    }
  }
  const double multiplier = std::exp(log_multiplier);

  ChainResult result;
  result.dimension = target.dimension;
  result.kept = config.iterations / config.thinning;
  result.draws.reserve(result.kept * target.dimension);
  result.step_multiplier = multiplier;

  std::size_t accepted_count = 0;
  const std::size_t raw_steps = result.kept * config.thinning;
  for (std::size_t t = 0; t < raw_steps; ++t) {
    if (step_in_place(current, current_logp, target, scale, multiplier, rng, proposal)) {
      ++accepted_count;
    }
    if ((t + 1) % config.thinning == 0) {
      result.draws.insert(result.draws.end(), current.begin(), current.end());
    }
  }
  result.acceptance_rate =
      raw_steps == 0 ? 0.0 : static_cast<double>(accepted_count) / static_cast<double>(raw_steps);

  result.ess.resize(target.dimension);
  for (std::size_t d = 0; d < target.dimension; ++d) {
    result.ess[d] = effective_sample_size(
        std::span<const double>(result.draws.data() + d, result.draws.size() - d),
        target.dimension);
  }
  return result;
}

std::vector<PosteriorSummary> summarize_chain(const ChainResult& result, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("summarize_chain: level must lie in (0,1)");
  }
  if (result.kept < 2) {
    throw std::invalid_argument("summarize_chain: need at least two kept draws");
  }
  std::vector<PosteriorSummary> out(result.dimension);
  std::vector<double> column(result.kept);
  for (std::size_t d = 0; d < result.dimension; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < result.kept; ++i) {
      column[i] = result.at(i, d);
      mean += column[i];
    }
    mean /= static_cast<double>(result.kept);
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    const double variance = ss / static_cast<double>(result.kept - 1);

    std::sort(column.begin(), column.end());
    auto quantile = [&](double p) {
      const double pos = p * static_cast<double>(result.kept - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, result.kept - 1);
      const double frac = pos - static_cast<double>(lo);
      return column[lo] * (1.0 - frac) + column[hi] * frac;
    };
    out[d] = PosteriorSummary{mean, variance, quantile(0.5 * (1.0 - level)),
                              quantile(0.5 * (1.0 + level)), level};
  }
  return out;
}

double effective_sample_size(std::span<const double> series, std::size_t stride) {
  if (stride == 0) stride = 1;
  const std::size_t n = (series.size() + stride - 1) / stride;
  if (n < 4) return static_cast<double>(n);

  auto value = [&](std::size_t i) { return series[i * stride]; };
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += value(i);
  mean /= static_cast<double>(n);

  auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      acc += (value(i) - mean) * (value(i + lag) - mean);
    }
    return acc / static_cast<double>(n);
  };

  const double c0 = autocov(0);
  if (!(c0 > 0.0) || !std::isfinite(c0)) return static_cast<double>(n);

  // Sum of adjacent autocorrelation pairs until the first nonpositive pair.
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n && m < 1024; ++m) {
    const double pair = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0);
  return static_cast<double>(n) / tau;
}

}  // namespace pseudoexp
