// SPDX-License-Identifier: Apache-2.0
#include "starsr/a3c.hpp"

#include <thread>

namespace starsr::drl {

namespace {

std::vector<int> with_io(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

A3cAgent::A3cAgent(int state_dim, int action_dim, A3cHyper hyper, std::uint64_t seed)
    : hyper_(std::move(hyper)),
      actor_(state_dim, action_dim, hyper_.actor_hidden, hyper_.init_log_std),
      critic_(with_io(state_dim, hyper_.critic_hidden, 1)),
      obs_norm_(static_cast<std::size_t>(state_dim), hyper_.normalize_observations) {
  Philox init_rng(seed, 0x696e6974ULL);
  actor_.init(init_rng);
  critic_.init(init_rng);
  actor_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.actor_lr, actor_.mean_net().param_count());
  log_std_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.actor_lr, action_dim);
  critic_opt_ = nn::Optimizer(hyper_.optimizer, hyper_.critic_lr, critic_.param_count());
}

A3cAgent::SegmentGradients A3cAgent::segment_gradients(const nn::GaussianPolicy& actor, const nn::Mlp& critic,
                                                       const MatrixXd& states, const MatrixXd& pre_tanh,
                                                       const VectorXd& rewards, double bootstrap,
                                                       double discount, double entropy_coeff) {
  SegmentGradients g;
  const VectorXd returns = a3c_segment_returns(rewards, bootstrap, discount);

  nn::MlpCache critic_cache;
  const Eigen::RowVectorXd v = critic.forward(states, critic_cache).row(0);
  const VectorXd advantages = returns - v.transpose();
  const MatrixXd upstream = 2.0 * (v - returns.transpose());
  critic.backward(critic_cache, upstream, g.critic_grad);

  nn::MlpCache actor_cache;
  MatrixXd means;
  actor.log_prob(states, pre_tanh, &actor_cache, &means);
  const double k = static_cast<double>(rewards.size());
  actor.log_prob_backward(actor_cache, means, pre_tanh, -advantages, -entropy_coeff * k, g.mean_grad,
                          g.log_std_grad);
  return g;
}

void A3cAgent::apply(const SegmentGradients& g, const std::vector<VectorXd>& raw_states) {
  std::lock_guard lock(mutex_);
  actor_opt_.step(actor_.mean_net().params(), g.mean_grad);
  log_std_opt_.step(actor_.log_std(), g.log_std_grad);
  actor_.clamp_log_std();
  critic_opt_.step(critic_.params(), g.critic_grad);
  for (const auto& s : raw_states) obs_norm_.update(s);
  ++updates_;
}

EpisodeStats A3cAgent::run_worker(const EnvConfig& env_cfg, std::uint64_t seed, int worker) {
  EnvConfig cfg = env_cfg;
  cfg.episode_length = hyper_.steps;
  Environment env(cfg);
  Philox rng(seed, 0x613363ULL + static_cast<std::uint64_t>(worker));
  EpisodeAccumulator acc;

  VectorXd raw = env.reset(seed);
  const int k = std::max(1, hyper_.minibatch);
  bool done = false;
  while (!done) {
    nn::GaussianPolicy local_actor;
    nn::Mlp local_critic;
    RunningNormalizer local_norm;
    {
      std::lock_guard lock(mutex_);
      local_actor = actor_;
      local_critic = critic_;
      local_norm = obs_norm_;
    }
    std::vector<VectorXd> raw_states, states, pre;
    std::vector<double> rewards;
    while (!done && static_cast<int>(rewards.size()) < k) {
      const VectorXd s = local_norm.normalize(raw);
      const nn::PolicySample smp = local_actor.sample(s, rng);
      StepResult step = env.step(smp.action);
      acc.add(step);
      raw_states.push_back(raw);
      states.push_back(s);
      pre.push_back(smp.pre_tanh);
      rewards.push_back(step.reward);
      done = step.done;
      raw = std::move(step.next_state);
    }
    const double bootstrap = done ? 0.0 : local_critic.forward(local_norm.normalize(raw))(0);
    const auto n = static_cast<Eigen::Index>(rewards.size());
    MatrixXd S(states.front().size(), n), U(pre.front().size(), n);
    VectorXd R(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      S.col(t) = states[static_cast<std::size_t>(t)];
      U.col(t) = pre[static_cast<std::size_t>(t)];
      R(t) = rewards[static_cast<std::size_t>(t)];
    }
    apply(segment_gradients(local_actor, local_critic, S, U, R, bootstrap, hyper_.discount, hyper_.entropy_coeff),
          raw_states);
  }
  return acc.finish(0);
}

EpisodeStats A3cAgent::run_episode(const EnvConfig& env, std::uint64_t episode_seed, int episode) {
  const int w = std::max(1, hyper_.workers);
  std::vector<EpisodeStats> per(static_cast<std::size_t>(w));
  auto seed_for = [&](int i) {
    return i == 0 ? episode_seed : mix_seed({episode_seed, static_cast<std::uint64_t>(i)});
  };
  if (w == 1) {
    per[0] = run_worker(env, seed_for(0), 0);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(w));
    std::vector<std::thread> threads;
    for (int i = 0; i < w; ++i) {
      threads.emplace_back([&, i] {
        try {
          per[static_cast<std::size_t>(i)] = run_worker(env, seed_for(i), i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  EpisodeStats out;
  out.episode = episode;
  for (const auto& s : per) {
    out.mean_reward += s.mean_reward / w;
    out.min_rate += s.min_rate / w;
    out.satisfied_count += s.satisfied_count / w;
  }
  return out;
}

VectorXd A3cAgent::act(const VectorXd& raw_state) const {
  std::lock_guard lock(mutex_);
  return actor_.deterministic(obs_norm_.normalize(raw_state));
}

nn::Checkpoint A3cAgent::checkpoint() const {
  std::lock_guard lock(mutex_);
  nn::Checkpoint ck;
  ck.put_mlp("actor.mean", actor_.mean_net());
  ck.put_vector("actor.log_std", actor_.log_std());
  ck.put_mlp("critic", critic_);
  ck.put_optimizer("opt.actor", actor_opt_);
  ck.put_optimizer("opt.log_std", log_std_opt_);
  ck.put_optimizer("opt.critic", critic_opt_);
  VectorXd packed(1 + 2 * obs_norm_.mean().size());
  packed << obs_norm_.count(), obs_norm_.mean(), obs_norm_.m2();
  ck.put("obs_norm", {}, packed);
  return ck;
}

}  // namespace starsr::drl
