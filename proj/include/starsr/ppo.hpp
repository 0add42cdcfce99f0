// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "starsr/drl.hpp"

namespace starsr::drl {

/// Clipped-surrogate PPO with a Gaussian (tanh-squashed) actor and a state-value critic.
///
/// Transitions are gathered into a rollout; update() freezes the critic as
/// phi_old, computes advantages and targets from it, runs `epochs` passes of
/// minibatch gradient steps and then discards the rollout. The behaviour
/// log-probabilities stored with each transition play the role of theta_old.
class PpoAgent : public Agent {
 public:
  struct Transition {
    VectorXd state;  // normalized
    VectorXd pre_tanh;
    double log_prob = 0.0;
    double reward = 0.0;
    VectorXd next_state;  // normalized
    bool terminal = false;
  };

  struct UpdateStats {
    double surrogate = 0.0;
    double critic_loss = 0.0;
    int clipped = 0;
    int dropped = 0;
  };

  PpoAgent(int state_dim, int action_dim, PpoHyper hyper, std::uint64_t seed);

  /// Normalizes a raw state, optionally folding it into the running statistics.
  VectorXd observe(const VectorXd& raw_state, bool update_stats);
  nn::PolicySample sample(const VectorXd& normalized_state);
  void store(Transition t) { rollout_.push_back(std::move(t)); }
  bool rollout_full() const { return static_cast<int>(rollout_.size()) >= hyper_.rollout_steps; }
  std::size_t rollout_size() const { return rollout_.size(); }
  UpdateStats update();

  VectorXd act(const VectorXd& raw_state) const override;
  nn::Checkpoint checkpoint() const override;

  const nn::GaussianPolicy& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  const PpoHyper& hyper() const { return hyper_; }

 private:
  PpoHyper hyper_;
  nn::GaussianPolicy actor_;
  nn::Mlp critic_;
  nn::Optimizer actor_opt_, log_std_opt_, critic_opt_;
  RunningNormalizer obs_norm_;
  Philox rng_;
  std::vector<Transition> rollout_;
};

}  // namespace starsr::drl
