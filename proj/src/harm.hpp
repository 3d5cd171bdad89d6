#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace pseudoexp {

// Log-kernel on the positive orthant; -inf marks zero density. Must be
// deterministic and finite at the chain's initial point.
struct LogTarget {
  std::size_t dimension = 1;
  std::function<double(std::span<const double>)> log_density;
};

struct ChainConfig {
  std::size_t iterations = 100000;  // post-burn-in raw steps
  std::size_t burn_in = 10000;
  std::size_t thinning = 10;
  std::vector<double> initial_point;  // strictly positive, finite target
  std::vector<double> step_scale;     // per-dimension; empty derives from initial point
  std::uint64_t seed = 0;
  bool adapt = true;                // Robbins-Monro on a log step multiplier
  double target_acceptance = 0.35;  // during burn-in only
};

struct ChainResult {
  std::size_t dimension = 0;
  std::size_t kept = 0;
  std::vector<double> draws;  // kept x dimension, row-major
  double acceptance_rate = 0.0;
  std::vector<double> ess;
  double step_multiplier = 1.0;  // frozen after burn-in

  std::span<const double> row(std::size_t i) const {
    return {draws.data() + i * dimension, dimension};
  }
  // column view helper
  double at(std::size_t i, std::size_t d) const { return draws[i * dimension + d]; }
};

// Uniform direction on the unit sphere (sign flips in one dimension).
std::vector<double> unit_direction(std::size_t dimension, Rng& rng);

// One hit-and-run Metropolis move: uniform direction, Gaussian signed step
// scaled per dimension, proposals off the positive orthant or with -inf target
// rejected, otherwise accepted with probability min(1, exp(delta)).
std::pair<std::vector<double>, bool> harm_step(std::span<const double> current,
                                               const LogTarget& target,
                                               std::span<const double> step_scale, Rng& rng);

ChainResult run_chain(const LogTarget& target, const ChainConfig& config);

// Per-dimension mean, sample variance and equal-tail empirical interval.
std::vector<PosteriorSummary> summarize_chain(const ChainResult& result, double level);

// Geyer initial-positive-sequence estimator; diagnostic only.
double effective_sample_size(std::span<const double> series, std::size_t stride);

}  // namespace pseudoexp
