// SPDX-License-Identifier: Apache-2.0
#include "starsr/td3.hpp"

#include <algorithm>
#include <cmath>

namespace starsr::drl {

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

MatrixXd stack(const MatrixXd& s, const MatrixXd& a) {
  MatrixXd x(s.rows() + a.rows(), s.cols());
  x << s, a;
  return x;
}

}  // namespace

Td3Agent::Td3Agent(int state_dim, int action_dim, Td3Hyper hyper, std::uint64_t seed)
    : hyper_(std::move(hyper)),
      action_dim_(action_dim),
      actor_(with_io(state_dim, hyper_.actor_hidden, action_dim)),
      critic1_(with_io(state_dim + action_dim, hyper_.critic_hidden, 1)),
      critic2_(with_io(state_dim + action_dim, hyper_.critic_hidden, 1)),
      buffer_(hyper_.buffer_capacity, state_dim, action_dim),
      obs_norm_(static_cast<std::size_t>(state_dim), hyper_.normalize_observations),
      rng_(seed, 0x746433ULL) {
  Philox init_rng(seed, 0x696e6974ULL);
  actor_.init(init_rng);
  critic1_.init(init_rng);
  critic2_.init(init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.actor_lr, actor_.param_count());
  critic1_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.critic_lr, critic1_.param_count());
  critic2_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.critic_lr, critic2_.param_count());
}

VectorXd Td3Agent::observe(const VectorXd& raw_state, bool update_stats) {
  if (update_stats) obs_norm_.update(raw_state);
  return obs_norm_.normalize(raw_state);
}

MatrixXd Td3Agent::policy(const MatrixXd& normalized_states) const {
  return actor_.forward(normalized_states).array().tanh().matrix();
}

VectorXd Td3Agent::explore(const VectorXd& normalized_state) {
  ++steps_seen_;
  VectorXd a(action_dim_);
  if (steps_seen_ <= hyper_.warmup_steps) {
    for (int d = 0; d < action_dim_; ++d) a(d) = rng_.uniform(-1.0, 1.0);
    return a;
  }
  a = actor_.forward(normalized_state).array().tanh().matrix();
  for (int d = 0; d < action_dim_; ++d) a(d) = std::clamp(a(d) + hyper_.explore_noise * rng_.normal(), -1.0, 1.0);
  return a;
}

void Td3Agent::store(const VectorXd& s, const VectorXd& a, double r, const VectorXd& s_next, bool terminal) {
  buffer_.add(s, a, r, s_next, terminal);
}

double Td3Agent::q_value(int which, const VectorXd& s, const VectorXd& a) const {
  const nn::Mlp& c = which == 0 ? critic1_ : critic2_;
  VectorXd x(s.size() + a.size());
  x << s, a;
  return c.forward(x)(0);
}

VectorXd Td3Agent::targets(const ReplayBuffer::Batch& batch) {
  MatrixXd a_next = actor_target_.forward(batch.s_next).array().tanh().matrix();
  for (Eigen::Index q = 0; q < a_next.cols(); ++q) {
    for (Eigen::Index d = 0; d < a_next.rows(); ++d) {
      const double noise = std::clamp(hyper_.target_noise * rng_.normal(), -hyper_.noise_clip, hyper_.noise_clip);
      a_next(d, q) = std::clamp(a_next(d, q) + noise, -1.0, 1.0);
    }
  }
  const MatrixXd x_next = stack(batch.s_next, a_next);
  const Eigen::RowVectorXd q1 = critic1_target_.forward(x_next).row(0);
  const Eigen::RowVectorXd q2 = critic2_target_.forward(x_next).row(0);
  VectorXd y(batch.r.size());
  for (Eigen::Index q = 0; q < y.size(); ++q) {
    y(q) = td3_target(batch.r(q), q1(q), q2(q), hyper_.discount, batch.done(q) > 0.5);
  }
  return y;
}

Td3Agent::UpdateStats Td3Agent::update() { return update(buffer_.sample(hyper_.minibatch, rng_)); }

Td3Agent::UpdateStats Td3Agent::update(const ReplayBuffer::Batch& batch) {
  UpdateStats stats;
  ++update_calls_;
  const VectorXd y = targets(batch);
  const MatrixXd x = stack(batch.s, batch.a);
  stats.critic_loss = 0.5 * (critic_regression_step(critic1_, critic1_opt_, x, y) +
                             critic_regression_step(critic2_, critic2_opt_, x, y));

  if (update_calls_ % hyper_.policy_delay == 0) {
    // Ascend mean q1(s, mu(s)): descend on its negation through tanh and the critic input.
    nn::MlpCache actor_cache, critic_cache;
    const MatrixXd pre = actor_.forward(batch.s, actor_cache);
    const MatrixXd act = pre.array().tanh().matrix();
    critic1_.forward(stack(batch.s, act), critic_cache);
    const double n = static_cast<double>(batch.r.size());
    VectorXd scratch;
    const MatrixXd d_input =
        critic1_.backward(critic_cache, MatrixXd::Constant(1, batch.s.cols(), -1.0 / n), scratch);
    const MatrixXd d_pre =
        (d_input.bottomRows(action_dim_).array() * (1.0 - act.array().square())).matrix();
    VectorXd actor_grad;
    actor_.backward(actor_cache, d_pre, actor_grad);
    actor_opt_.step(actor_.params(), actor_grad);

    nn::soft_update(actor_target_.params(), actor_.params(), hyper_.target_update);
    nn::soft_update(critic1_target_.params(), critic1_.params(), hyper_.target_update);
    nn::soft_update(critic2_target_.params(), critic2_.params(), hyper_.target_update);
    stats.actor_updated = true;
    ++actor_updates_;
  }
  return stats;
}

VectorXd Td3Agent::act(const VectorXd& raw_state) const {
  return actor_.forward(obs_norm_.normalize(raw_state)).array().tanh().matrix();
}

nn::Checkpoint Td3Agent::checkpoint() const {
  nn::Checkpoint ck;
  ck.put_mlp("actor", actor_);
  ck.put_mlp("actor.target", actor_target_);
  ck.put_mlp("critic1", critic1_);
  ck.put_mlp("critic2", critic2_);
  ck.put_mlp("critic1.target", critic1_target_);
  ck.put_mlp("critic2.target", critic2_target_);
  ck.put_optimizer("opt.actor", actor_opt_);
  ck.put_optimizer("opt.critic1", critic1_opt_);
  ck.put_optimizer("opt.critic2", critic2_opt_);
  VectorXd packed(1 + 2 * obs_norm_.mean().size());
  packed << obs_norm_.count(), obs_norm_.mean(), obs_norm_.m2();
  ck.put("obs_norm", {}, packed);
  return ck;
}

}  // namespace starsr::drl
