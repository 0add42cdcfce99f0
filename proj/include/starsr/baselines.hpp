// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "starsr/mdp_env.hpp"

namespace starsr {

/// An environment configuration pinned to one channel realization.
struct EnvSpec {
  EnvConfig env{};
  std::uint64_t channel_seed = 1;
};

/// The realization Environment::reset(channel_seed) would produce.
ChannelRealization realize(const EnvSpec& spec);

struct SearchResult {
  bool feasible = false;
  double objective = 0.0;  // best feasible min-rate; 0 when nothing feasible was found
  double sum_rate = 0.0;   // sum of all 3I rates at the best point
  DecisionVariables best;
  int best_index = -1;     // sample index of the best point
  int feasible_count = 0;
};

/// Uniform actions decoded in derived-R mode; a sample counts only when all
/// constraints hold. The sample stream depends on `seed` alone, so a larger
/// budget extends a smaller one.
SearchResult random_search(const EnvSpec& spec, int budget, std::uint64_t seed);

/// Explicit value lists for every scalar variable of an N = M = I = 1 instance.
/// In passive mode beta_r is ignored and set to 1 - beta_t.
struct GridSpec {
  std::vector<double> eta, tau, power, theta_t, theta_r, beta_t, beta_r;
  double cap = 1e7;

  /// Evenly spaced axes covering every variable's full range. Phases use
  /// `phase` points on [0, 2 pi).
  static GridSpec uniform(const SystemConfig& cfg, RisMode mode, int eta, int tau, int power, int phase, int beta);
  double size(RisMode mode) const;
};

/// n evenly spaced points on [lo, hi] including both ends (n = 1 gives hi).
std::vector<double> linspace(double lo, double hi, int n);

class GridTooLarge : public std::length_error {
 public:
  GridTooLarge(double points, double cap);
  double points() const { return points_; }

 private:
  double points_;
};

/// Exhaustive max feasible min-rate over the grid. Scalar beamformers are 1.
/// Throws std::invalid_argument unless N = M = I = 1 and GridTooLarge when the
/// grid exceeds its cap.
SearchResult grid_oracle(const EnvSpec& spec, const GridSpec& grid);

}  // namespace starsr
