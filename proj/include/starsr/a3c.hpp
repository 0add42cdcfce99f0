// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>

#include "starsr/drl.hpp"

namespace starsr::drl {

/// Asynchronous advantage actor-critic. Global actor/critic parameters are
/// shared by `workers` workers, each stepping its own environment. A worker
/// copies the global parameters at the start of every k-step segment, rolls
/// the segment out, and applies its gradients to the global parameters.
/// With a single worker the run is fully deterministic.
class A3cAgent : public Agent {
 public:
  A3cAgent(int state_dim, int action_dim, A3cHyper hyper, std::uint64_t seed);

  /// Runs one episode on every worker; the returned stats average the workers.
  /// Worker 0 resets with `episode_seed`, worker w > 0 with mix_seed({episode_seed, w}).
  EpisodeStats run_episode(const EnvConfig& env, std::uint64_t episode_seed, int episode);

  VectorXd act(const VectorXd& raw_state) const override;
  nn::Checkpoint checkpoint() const override;

  const nn::GaussianPolicy& actor() const { return actor_; }
  const nn::Mlp& critic() const { return critic_; }
  const A3cHyper& hyper() const { return hyper_; }
  long long global_updates() const { return updates_; }

  struct SegmentGradients {
    VectorXd mean_grad, log_std_grad, critic_grad;
  };

  /// Gradients of one segment for the loss
  ///   -sum_t A_t log pi(a_t|s_t) - c_H k H(pi) + sum_t (V(s_t) - R_t)^2,
  /// where R_t are the k-step returns and A_t = R_t - V(s_t).
  static SegmentGradients segment_gradients(const nn::GaussianPolicy& actor, const nn::Mlp& critic,
                                            const MatrixXd& states, const MatrixXd& pre_tanh,
                                            const VectorXd& rewards, double bootstrap, double discount,
                                            double entropy_coeff);

 private:
  EpisodeStats run_worker(const EnvConfig& env, std::uint64_t seed, int worker);
  void apply(const SegmentGradients& g, const std::vector<VectorXd>& raw_states);

  A3cHyper hyper_;
  nn::GaussianPolicy actor_;
  nn::Mlp critic_;
  nn::Optimizer actor_opt_, log_std_opt_, critic_opt_;
  RunningNormalizer obs_norm_;
  long long updates_ = 0;
  mutable std::mutex mutex_;
};

}  // namespace starsr::drl
