// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "starsr/checkpoint.hpp"
#include "starsr/mdp_env.hpp"
#include "starsr/nn.hpp"

namespace starsr::drl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Defaults follow the learning-parameter table: hidden sizes, minibatch,
// critic/actor learning rates, target update rate, discount, entropy
// coefficient, worker count, episodes and steps per episode.

struct PpoHyper {
  std::vector<int> actor_hidden{128, 128};
  std::vector<int> critic_hidden{128, 128};
  int minibatch = 32;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double target_update = 5e-4;  // listed for PPO but unused: PPO keeps no target network
  double discount = 0.99;
  double entropy_coeff = 0.01;
  int episodes = 30000;
  int steps = 200;
  // Not in the table.
  double clip = 0.2;
  int epochs = 4;
  int rollout_steps = 200;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Sgd;
  bool normalize_advantages = true;
  bool normalize_observations = true;
  double init_log_std = 0.0;

  friend bool operator==(const PpoHyper&, const PpoHyper&) = default;
};

struct Td3Hyper {
  std::vector<int> actor_hidden{400, 300};
  std::vector<int> critic_hidden{400, 300};
  int minibatch = 64;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double target_update = 5e-4;
  double discount = 0.99;
  int episodes = 30000;
  int steps = 200;
  // Not in the table.
  int policy_delay = 2;
  double target_noise = 0.2;
  double noise_clip = 0.5;
  double explore_noise = 0.1;
  int buffer_capacity = 100000;
  int warmup_steps = 1000;
  int train_every = 1;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Sgd;
  bool normalize_observations = true;

  friend bool operator==(const Td3Hyper&, const Td3Hyper&) = default;
};

struct A3cHyper {
  std::vector<int> actor_hidden{128, 128};
  std::vector<int> critic_hidden{128, 128};
  int minibatch = 64;  // used as the k-step update horizon
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double target_update = 5e-4;  // listed for A3C but unused
  double discount = 0.99;
  double entropy_coeff = 0.01;
  int workers = 3;
  int episodes = 30000;
  int steps = 200;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Sgd;
  bool normalize_observations = true;
  double init_log_std = 0.0;

  friend bool operator==(const A3cHyper&, const A3cHyper&) = default;
};

struct HyperSet {
  PpoHyper ppo{};
  Td3Hyper td3{};
  A3cHyper a3c{};

  friend bool operator==(const HyperSet&, const HyperSet&) = default;
};

struct EpisodeStats {
  int episode = 0;
  double mean_reward = 0.0;
  double min_rate = 0.0;
  double satisfied_count = 0.0;
};

struct TrainingTrace {
  std::vector<EpisodeStats> episodes;

  /// Mean of mean_reward over the last `window` episodes (all if fewer).
  double tail_mean_reward(std::size_t window) const;
};

/// Accumulates per-step results into one EpisodeStats.
class EpisodeAccumulator {
 public:
  void add(const StepResult& step);
  EpisodeStats finish(int episode) const;

 private:
  double reward_ = 0.0, min_rate_ = 0.0, satisfied_ = 0.0;
  int count_ = 0;
};

/// Columns: config_hash, seed, episode, mean_reward, min_rate, satisfied_count.
void write_trace_csv(std::ostream& out, const TrainingTrace& trace, const std::string& config_hash,
                     std::uint64_t seed);

/// Deterministic policy interface shared by the trained agents.
class Agent {
 public:
  virtual ~Agent() = default;
  /// Action for a raw (unnormalized) state.
  virtual VectorXd act(const VectorXd& raw_state) const = 0;
  virtual nn::Checkpoint checkpoint() const = 0;
};

/// Uniform-capacity ring buffer of transitions for off-policy learning.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int state_dim, int action_dim);

  void add(const VectorXd& s, const VectorXd& a, double r, const VectorXd& s_next, bool done);
  int size() const { return size_; }
  int capacity() const { return capacity_; }

  struct Batch {
    MatrixXd s, a, s_next;
    VectorXd r, done;
  };
  Batch sample(int batch, Philox& rng) const;

 private:
  int capacity_;
  int size_ = 0;
  int next_ = 0;
  MatrixXd s_, a_, s_next_;
  VectorXd r_, done_;
};

/// Omega = r + discount V_old(s') - V_old(s); the bootstrap is dropped at terminal steps.
double ppo_advantage(double reward, double value, double next_value, double discount, bool terminal);

struct SurrogateResult {
  double objective = 0.0;       // mean of min(rho Omega, clip(rho) Omega) over kept samples
  VectorXd dobj_dlogp;          // d objective / d log pi for each sample (0 when the clip binds)
  int clipped = 0;
  int dropped = 0;              // samples with a non-finite ratio
};

/// Clipped surrogate of PPO evaluated from log-probability ratios.
SurrogateResult ppo_surrogate(const VectorXd& log_prob_new, const VectorXd& log_prob_old,
                              const VectorXd& advantages, double clip);

/// One SGD/Adam step of the critic on mean (V(s) - target)^2; returns the loss before the step.
double critic_regression_step(nn::Mlp& critic, nn::Optimizer& opt, const MatrixXd& states, const VectorXd& targets);

/// y = r + discount min(q1, q2); no bootstrap at terminal steps.
double td3_target(double reward, double q1, double q2, double discount, bool terminal);

/// sum_{i<k} discount^i r_i + discount^k bootstrap.
double a3c_kstep_return(const VectorXd& rewards, double bootstrap, double discount);

/// Returns for every position of a k-step segment, computed backwards from the bootstrap.
VectorXd a3c_segment_returns(const VectorXd& rewards, double bootstrap, double discount);

}  // namespace starsr::drl
