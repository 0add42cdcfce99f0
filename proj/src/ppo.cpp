// SPDX-License-Identifier: Apache-2.0
#include "starsr/ppo.hpp"

#include <cmath>
#include <numeric>

namespace starsr::drl {

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

PpoAgent::PpoAgent(int state_dim, int action_dim, PpoHyper hyper, std::uint64_t seed)
    : hyper_(std::move(hyper)),
      actor_(state_dim, action_dim, hyper_.actor_hidden, hyper_.init_log_std),
      critic_(with_io(state_dim, hyper_.critic_hidden, 1)),
      obs_norm_(static_cast<std::size_t>(state_dim), hyper_.normalize_observations),
      rng_(seed, 0x70706fULL) {
  Philox init_rng(seed, 0x696e6974ULL);
  actor_.init(init_rng);
  critic_.init(init_rng);
  actor_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.actor_lr, actor_.mean_net().param_count());
  log_std_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.actor_lr, action_dim);
  critic_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.critic_lr, critic_.param_count());
}

VectorXd PpoAgent::observe(const VectorXd& raw_state, bool update_stats) {
  if (update_stats) obs_norm_.update(raw_state);
  return obs_norm_.normalize(raw_state);
}

nn::PolicySample PpoAgent::sample(const VectorXd& normalized_state) { return actor_.sample(normalized_state, rng_); }

PpoAgent::UpdateStats PpoAgent::update() {
  UpdateStats stats;
  const auto n = static_cast<Eigen::Index>(rollout_.size());
  if (n == 0) return stats;
  const auto sdim = critic_.input_dim();
  const auto adim = actor_.action_dim();

  MatrixXd S(sdim, n), S_next(sdim, n), U(adim, n);
  VectorXd logp_old(n), rewards(n), terminal(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    const auto& t = rollout_[static_cast<std::size_t>(q)];
    S.col(q) = t.state;
    S_next.col(q) = t.next_state;
    U.col(q) = t.pre_tanh;
    logp_old(q) = t.log_prob;
    rewards(q) = t.reward;
    terminal(q) = t.terminal ? 1.0 : 0.0;
  }

  // phi_old is the critic as it stands before this update.
  const Eigen::RowVectorXd v_old = critic_.forward(S).row(0);
  const Eigen::RowVectorXd v_next_old = critic_.forward(S_next).row(0);
  VectorXd advantages(n), targets(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    const bool term = terminal(q) > 0.5;
    advantages(q) = ppo_advantage(rewards(q), v_old(q), v_next_old(q), hyper_.discount, term);
    targets(q) = rewards(q) + (term ? 0.0 : hyper_.discount * v_next_old(q));
  }
  if (hyper_.normalize_advantages && n > 1) {
    const double mean = advantages.mean();
    const double sd = std::sqrt((advantages.array() - mean).square().mean());
    advantages = ((advantages.array() - mean) / (sd + 1e-8)).matrix();
  }

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const Eigen::Index Q = std::max(1, hyper_.minibatch);
  int batches = 0;
  for (int epoch = 0; epoch < hyper_.epochs; ++epoch) {
    rng_.shuffle(std::span<Eigen::Index>(idx));
    for (Eigen::Index start = 0; start < n; start += Q) {
      const Eigen::Index len = std::min(Q, n - start);
      MatrixXd s(sdim, len), u(adim, len);
      VectorXd lo(len), adv(len), tgt(len);
      for (Eigen::Index k = 0; k < len; ++k) {
        const auto j = idx[static_cast<std::size_t>(start + k)];
        s.col(k) = S.col(j);
        u.col(k) = U.col(j);
        lo(k) = logp_old(j);
        adv(k) = advantages(j);
        tgt(k) = targets(j);
      }

      nn::MlpCache cache;
      MatrixXd means;
      const VectorXd logp_new = actor_.log_prob(s, u, &cache, &means);
      const SurrogateResult sur = ppo_surrogate(logp_new, lo, adv, hyper_.clip);
      // Descent on -(surrogate + c_H * entropy).
      VectorXd mean_grad, log_std_grad;
      actor_.log_prob_backward(cache, means, u, -sur.dobj_dlogp, -hyper_.entropy_coeff, mean_grad, log_std_grad);
      actor_opt_.step(actor_.mean_net().params(), mean_grad);
      log_std_opt_.step(actor_.log_std(), log_std_grad);
      actor_.clamp_log_std();

      stats.critic_loss += critic_regression_step(critic_, critic_opt_, s, tgt);
      stats.surrogate += sur.objective;
      stats.clipped += sur.clipped;
      stats.dropped += sur.dropped;
      ++batches;
    }
  }
  if (batches > 0) {
    stats.surrogate /= batches;
    stats.critic_loss /= batches;
  }
  rollout_.clear();
  return stats;
}

VectorXd PpoAgent::act(const VectorXd& raw_state) const {
  return actor_.deterministic(obs_norm_.normalize(raw_state));
}

nn::Checkpoint PpoAgent::checkpoint() const {
  nn::Checkpoint ck;
  ck.put_mlp("actor.mean", actor_.mean_net());
  ck.put_vector("actor.log_std", actor_.log_std());
  ck.put_mlp("critic", critic_);
  ck.put_optimizer("opt.actor", actor_opt_);
  ck.put_optimizer("opt.log_std", log_std_opt_);
  ck.put_optimizer("opt.critic", critic_opt_);
  ck.put("obs_norm", {}, [&] {
    VectorXd packed(1 + 2 * obs_norm_.mean().size());
    packed << obs_norm_.count(), obs_norm_.mean(), obs_norm_.m2();
    return packed;
  }());
  return ck;
}

}  // namespace starsr::drl
