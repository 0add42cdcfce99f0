// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "starsr/drl.hpp"

namespace starsr::drl {

/// Twin-delayed deterministic policy gradient. The actor output is squashed
/// by tanh into [-1, 1]; the critics take the concatenation [state; action].
class Td3Agent : public Agent {
 public:
  struct UpdateStats {
    double critic_loss = 0.0;
    bool actor_updated = false;
  };

  Td3Agent(int state_dim, int action_dim, Td3Hyper hyper, std::uint64_t seed);

  VectorXd observe(const VectorXd& raw_state, bool update_stats);
  /// Actor action plus clipped Gaussian exploration noise; uniform random during warm-up.
  VectorXd explore(const VectorXd& normalized_state);
  void store(const VectorXd& s, const VectorXd& a, double r, const VectorXd& s_next, bool terminal);
  bool ready() const { return buffer_.size() >= hyper_.minibatch; }
  UpdateStats update();
  UpdateStats update(const ReplayBuffer::Batch& batch);

  /// Smoothed target actions and regression targets y for a batch.
  VectorXd targets(const ReplayBuffer::Batch& batch);

  VectorXd act(const VectorXd& raw_state) const override;
  nn::Checkpoint checkpoint() const override;

  MatrixXd policy(const MatrixXd& normalized_states) const;
  double q_value(int which, const VectorXd& s, const VectorXd& a) const;

  nn::Mlp& actor() { return actor_; }
  nn::Mlp& critic(int which) { return which == 0 ? critic1_ : critic2_; }
  nn::Mlp& target_actor() { return actor_target_; }
  nn::Mlp& target_critic(int which) { return which == 0 ? critic1_target_ : critic2_target_; }
  int update_calls() const { return update_calls_; }
  int actor_updates() const { return actor_updates_; }
  const Td3Hyper& hyper() const { return hyper_; }

 private:
  Td3Hyper hyper_;
  int action_dim_;
  nn::Mlp actor_, actor_target_;
  nn::Mlp critic1_, critic2_, critic1_target_, critic2_target_;
  nn::Optimizer actor_opt_, critic1_opt_, critic2_opt_;
  ReplayBuffer buffer_;
  RunningNormalizer obs_norm_;
  Philox rng_;
  long long steps_seen_ = 0;
  int update_calls_ = 0;
  int actor_updates_ = 0;
};

}  // namespace starsr::drl
