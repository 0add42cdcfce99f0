// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "starsr/drl.hpp"

namespace starsr::drl {

enum class Algorithm { Ppo, Td3, A3c };

std::string algorithm_name(Algorithm a);
/// Accepts "ppo", "td3", "a3c"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);

struct TrainOptions {
  int episodes = 0;
  std::uint64_t seed = 0;
  /// Write a checkpoint every this many episodes (0 disables).
  int checkpoint_every = 0;
  std::string checkpoint_dir;
};

struct TrainResult {
  TrainingTrace trace;
  std::unique_ptr<Agent> agent;
};

/// Thrown when a non-finite loss or gradient stops training.
class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(const std::string& what, TrainingTrace trace, nn::Checkpoint last_good)
      : std::runtime_error(what), trace_(std::move(trace)), last_good_(std::move(last_good)) {}
  const TrainingTrace& trace() const { return trace_; }
  const nn::Checkpoint& last_good() const { return last_good_; }

 private:
  TrainingTrace trace_;
  nn::Checkpoint last_good_;
};

/// Seed passed to Environment::reset for episode `e`; shared by every algorithm
/// and by the random-policy baseline so that all see the same channel draws.
std::uint64_t episode_seed(std::uint64_t seed, int episode);

/// Steps per episode used by each algorithm.
int episode_steps(Algorithm algo, const HyperSet& hyper);

TrainResult train(Algorithm algo, const EnvConfig& env, const HyperSet& hyper, const TrainOptions& options);

/// Uniform random actions on the same episode seeds as train().
TrainingTrace random_policy_trace(const EnvConfig& env, int steps, int episodes, std::uint64_t seed);

}  // namespace starsr::drl
