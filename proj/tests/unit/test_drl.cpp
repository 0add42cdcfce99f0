// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "starsr/a3c.hpp"
#include "starsr/ppo.hpp"
#include "starsr/td3.hpp"
#include "starsr/train.hpp"

using namespace starsr;
using namespace starsr::drl;
using doctest::Approx;

namespace {

EnvConfig tiny_env() {
  EnvConfig env;
  env.system.n_bs_antennas = 1;
  env.system.n_ris_elements = 2;
  env.system.n_pairs = 1;
  env.episode_length = 6;
  return env;
}

HyperSet tiny_hyper() {
  HyperSet h;
  h.ppo.actor_hidden = h.ppo.critic_hidden = {8};
  h.ppo.steps = 6;
  h.ppo.rollout_steps = 12;
  h.ppo.minibatch = 4;
  h.td3.actor_hidden = h.td3.critic_hidden = {8};
  h.td3.steps = 6;
  h.td3.minibatch = 4;
  h.td3.warmup_steps = 5;
  h.a3c.actor_hidden = h.a3c.critic_hidden = {8};
  h.a3c.steps = 6;
  h.a3c.minibatch = 4;
  h.a3c.workers = 1;
  return h;
}

std::string trace_csv(const TrainingTrace& t) {
  std::ostringstream out;
  write_trace_csv(out, t, "abc", 7);
  return out.str();
}

}  // namespace

TEST_CASE("ppo advantage") {
  CHECK(ppo_advantage(1.0, 0.5, 0.0, 0.99, false) == Approx(0.5));
  CHECK(ppo_advantage(0.5, 1.0, 1.0, 0.98, false) == Approx(0.48).epsilon(1e-14));
  CHECK(ppo_advantage(0.7, 0.0, 100.0, 0.99, true) == 0.7);
  CHECK(ppo_advantage(-1.0, 1.0, 0.0, 0.99, true) == -2.0);
}

TEST_CASE("clipped surrogate") {
  VectorXd adv(3);
  adv << 1.0, -2.0, 0.5;
  const VectorXd zero = VectorXd::Zero(3);
  SurrogateResult r = ppo_surrogate(zero, zero, adv, 0.2);
  CHECK(r.objective == Approx(adv.mean()).epsilon(1e-15));
  CHECK(r.clipped == 0);
  CHECK(r.dobj_dlogp(1) == Approx(-2.0 / 3.0));

  VectorXd one(1), big(1);
  one << 1.0;
  big << std::log(1.5);
  r = ppo_surrogate(big, VectorXd::Zero(1), one, 0.2);
  CHECK(r.objective == Approx(1.2).epsilon(1e-14));
  CHECK(r.clipped == 1);
  CHECK(r.dobj_dlogp(0) == 0.0);

  VectorXd small(1), neg(1);
  small << std::log(0.5);
  neg << -1.0;
  r = ppo_surrogate(small, VectorXd::Zero(1), neg, 0.2);
  CHECK(r.objective == Approx(-0.8).epsilon(1e-14));
  // Ratio below 1 - eps with positive advantage stays unclipped.
  r = ppo_surrogate(small, VectorXd::Zero(1), one, 0.2);
  CHECK(r.objective == Approx(0.5).epsilon(1e-14));

  VectorXd with_inf(2);
  with_inf << 1000.0, 0.0;
  VectorXd a2(2);
  a2 << 1.0, 3.0;
  r = ppo_surrogate(with_inf, VectorXd::Zero(2), a2, 0.2);
  CHECK(r.dropped == 1);
  CHECK(r.objective == Approx(3.0));
}

TEST_CASE("critic regression step") {
  nn::Mlp v({1, 1});
  nn::Optimizer sgd(nn::OptimizerKind::Sgd, 0.5, v.param_count());
  MatrixXd s(1, 1);
  s << 1.0;
  VectorXd y(1);
  y << 1.0;
  // V = w s + b = 0; loss 1; grad (2, 2); step 0.5 -> w = b = 1.
  CHECK(critic_regression_step(v, sgd, s, y) == Approx(1.0));
  CHECK(v.params()(0) == Approx(1.0));
  CHECK(v.params()(1) == Approx(1.0));
}

TEST_CASE("td3 target and k-step returns") {
  CHECK(td3_target(1.0, 2.0, 3.0, 0.99, false) == Approx(2.98).epsilon(1e-14));
  CHECK(td3_target(1.0, 2.0, 3.0, 0.99, true) == 1.0);
  CHECK(a3c_kstep_return(VectorXd::Ones(10), 0.0, 1.0) == Approx(10.0));
  VectorXd r(2);
  r << 1.0, 1.0;
  CHECK(a3c_kstep_return(r, 0.0, 0.9) == Approx(1.9));
  CHECK(a3c_kstep_return(r, 10.0, 0.5) == Approx(1.0 + 0.5 + 0.25 * 10.0));
  CHECK_THROWS_AS(a3c_kstep_return(VectorXd(), 0.0, 0.9), std::invalid_argument);
  const VectorXd seg = a3c_segment_returns(r, 10.0, 0.5);
  CHECK(seg(1) == Approx(6.0));
  CHECK(seg(0) == Approx(4.0));
}

TEST_CASE("replay buffer") {
  ReplayBuffer buf(3, 2, 1);
  Philox rng(1);
  CHECK_THROWS_AS(buf.sample(1, rng), std::logic_error);
  for (int k = 0; k < 5; ++k) buf.add(VectorXd::Constant(2, k), VectorXd::Constant(1, -k), k, VectorXd::Zero(2), k == 4);
  CHECK(buf.size() == 3);
  const auto b = buf.sample(200, rng);
  CHECK(b.r.minCoeff() == 2.0);
  CHECK(b.r.maxCoeff() == 4.0);
  for (int q = 0; q < 200; ++q) {
    CHECK(b.s(0, q) == b.r(q));
    CHECK(b.a(0, q) == -b.r(q));
    CHECK(b.done(q) == (b.r(q) == 4.0 ? 1.0 : 0.0));
  }
  CHECK_THROWS_AS(ReplayBuffer(0, 1, 1), std::invalid_argument);
}

TEST_CASE("td3 policy delay and soft updates") {
  Td3Hyper h;
  h.actor_hidden = h.critic_hidden = {6};
  h.minibatch = 8;
  h.policy_delay = 2;
  Td3Agent agent(3, 2, h, 5);
  Philox rng(2);
  for (int k = 0; k < 20; ++k) {
    agent.store(VectorXd::Random(3), VectorXd::Random(2), rng.uniform(), VectorXd::Random(3), false);
  }
  REQUIRE(agent.ready());
  for (int call = 1; call <= 6; ++call) {
    const VectorXd target_before = agent.target_actor().params();
    const VectorXd actor_before = agent.actor().params();
    const auto stats = agent.update();
    CHECK(stats.actor_updated == (call % 2 == 0));
    CHECK(agent.actor_updates() == call / 2);
    if (stats.actor_updated) {
      CHECK(agent.actor().params() != actor_before);
      const VectorXd expect = 0.9995 * target_before + 0.0005 * agent.actor().params();
      CHECK((agent.target_actor().params() - expect).cwiseAbs().maxCoeff() < 1e-15);
    } else {
      CHECK(agent.actor().params() == actor_before);
      CHECK(agent.target_actor().params() == target_before);
    }
  }
  CHECK(agent.update_calls() == 6);
}

TEST_CASE("td3 terminal targets drop the bootstrap") {
  Td3Hyper h;
  h.actor_hidden = h.critic_hidden = {4};
  Td3Agent agent(2, 1, h, 9);
  ReplayBuffer::Batch b{MatrixXd::Random(2, 3), MatrixXd::Random(1, 3), MatrixXd::Random(2, 3), VectorXd(3),
                        VectorXd::Ones(3)};
  b.r << 0.25, -1.0, 3.0;
  CHECK(agent.targets(b) == b.r);
  b.done.setZero();
  const VectorXd y = agent.targets(b);
  for (int q = 0; q < 3; ++q) {
    const double lo = std::tanh(agent.target_actor().forward(VectorXd(b.s_next.col(q)))(0)) - 0.5;
    const double hi = lo + 1.0;
    double qmin = 1e300, qmax = -1e300;
    for (int k = 0; k <= 50; ++k) {
      VectorXd sa(3);
      sa << b.s_next.col(q), std::clamp(lo + k * (hi - lo) / 50.0, -1.0, 1.0);
      const double v = std::min(agent.target_critic(0).forward(sa)(0), agent.target_critic(1).forward(sa)(0));
      qmin = std::min(qmin, v);
      qmax = std::max(qmax, v);
    }
    CHECK(y(q) >= b.r(q) + 0.99 * qmin - 1e-3);
    CHECK(y(q) <= b.r(q) + 0.99 * qmax + 1e-3);
  }
}

TEST_CASE("td3 exploration") {
  Td3Hyper h;
  h.actor_hidden = h.critic_hidden = {4};
  h.warmup_steps = 3;
  Td3Agent agent(2, 3, h, 1);
  const VectorXd s = VectorXd::Zero(2);
  for (int k = 0; k < 10; ++k) {
    agent.observe(s, true);
    const VectorXd a = agent.explore(s);
    CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
    if (k >= 3) CHECK((a - agent.policy(MatrixXd(s)).col(0)).cwiseAbs().maxCoeff() <= h.noise_clip + 1e-12);
  }
}

TEST_CASE("a3c segment gradients match central differences") {
  Philox rng(6);
  nn::GaussianPolicy actor(3, 2, {5}, -0.2);
  actor.init(rng, 1.0);
  nn::Mlp critic({3, 5, 1});
  critic.init(rng);
  const MatrixXd S = MatrixXd::Random(3, 4), U = MatrixXd::Random(2, 4);
  VectorXd R(4);
  R << 0.3, -0.1, 0.8, 0.2;
  const double bootstrap = 0.4, gamma = 0.9, beta = 0.05;
  const auto g = A3cAgent::segment_gradients(actor, critic, S, U, R, bootstrap, gamma, beta);

  const VectorXd returns = a3c_segment_returns(R, bootstrap, gamma);
  const VectorXd adv = returns - critic.forward(S).row(0).transpose();
  auto actor_loss = [&](const nn::GaussianPolicy& p) {
    return -p.log_prob(S, U).dot(adv) - beta * 4.0 * p.entropy();
  };
  auto critic_loss = [&](const nn::Mlp& c) {
    return (c.forward(S).row(0).transpose() - returns).squaredNorm();
  };
  const double h = 1e-6;
  for (Eigen::Index k = 0; k < critic.param_count(); ++k) {
    nn::Mlp up = critic, down = critic;
    up.params()(k) += h;
    down.params()(k) -= h;
    CHECK(g.critic_grad(k) == Approx((critic_loss(up) - critic_loss(down)) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
  for (Eigen::Index k = 0; k < actor.mean_net().param_count(); ++k) {
    nn::GaussianPolicy up = actor, down = actor;
    up.mean_net().params()(k) += h;
    down.mean_net().params()(k) -= h;
    CHECK(g.mean_grad(k) == Approx((actor_loss(up) - actor_loss(down)) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
  for (Eigen::Index d = 0; d < 2; ++d) {
    nn::GaussianPolicy up = actor, down = actor;
    up.log_std()(d) += h;
    down.log_std()(d) -= h;
    CHECK(g.log_std_grad(d) == Approx((actor_loss(up) - actor_loss(down)) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("single-worker a3c equals a serial reference") {
  const EnvConfig env_cfg = tiny_env();
  A3cHyper h = tiny_hyper().a3c;
  h.normalize_observations = false;
  h.actor_lr = 1e-3;
  const int sdim = static_cast<int>(state_dim(env_cfg.system));
  const int adim = static_cast<int>(action_dim(env_cfg.system));
  A3cAgent agent(sdim, adim, h, 42);
  const std::uint64_t seed = 77;
  agent.run_episode(env_cfg, seed, 0);
  CHECK(agent.global_updates() == 2);  // 6 steps in segments of 4 and 2

  // Reference: same initialisation and sampling streams, plain SGD by hand.
  nn::GaussianPolicy actor(sdim, adim, h.actor_hidden, h.init_log_std);
  nn::Mlp critic({sdim, 8, 1});
  Philox init(42, 0x696e6974ULL);
  actor.init(init);
  critic.init(init);
  EnvConfig cfg = env_cfg;
  cfg.episode_length = h.steps;
  Environment env(cfg);
  Philox rng(seed, 0x613363ULL);
  VectorXd s = env.reset(seed);
  bool done = false;
  while (!done) {
    MatrixXd S(sdim, 0), U(adim, 0);
    std::vector<double> rewards;
    const nn::GaussianPolicy frozen = actor;
    const nn::Mlp frozen_critic = critic;
    while (!done && static_cast<int>(rewards.size()) < h.minibatch) {
      const nn::PolicySample smp = frozen.sample(s, rng);
      const StepResult step = env.step(smp.action);
      S.conservativeResize(Eigen::NoChange, S.cols() + 1);
      U.conservativeResize(Eigen::NoChange, U.cols() + 1);
      S.col(S.cols() - 1) = s;
      U.col(U.cols() - 1) = smp.pre_tanh;
      rewards.push_back(step.reward);
      done = step.done;
      s = step.next_state;
    }
    const double boot = done ? 0.0 : frozen_critic.forward(s)(0);
    const VectorXd R = Eigen::Map<const VectorXd>(rewards.data(), static_cast<Eigen::Index>(rewards.size()));
    const auto g = A3cAgent::segment_gradients(frozen, frozen_critic, S, U, R, boot, h.discount, h.entropy_coeff);
    actor.mean_net().params() -= h.actor_lr * g.mean_grad;
    actor.log_std() -= h.actor_lr * g.log_std_grad;
    actor.clamp_log_std();
    critic.params() -= h.critic_lr * g.critic_grad;
  }
  const nn::Checkpoint ck = agent.checkpoint();
  CHECK(ck.get_mlp("actor.mean").params() == actor.mean_net().params());
  CHECK(ck.get_vector("actor.log_std") == actor.log_std());
  CHECK(ck.get_mlp("critic").params() == critic.params());
}

TEST_CASE("algorithm names") {
  for (Algorithm a : {Algorithm::Ppo, Algorithm::Td3, Algorithm::A3c}) CHECK(parse_algorithm(algorithm_name(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("dqn"), std::invalid_argument);
  CHECK(episode_seed(1, 0) != episode_seed(1, 1));
  CHECK(episode_seed(1, 0) != episode_seed(2, 0));
}

TEST_CASE("training is deterministic for every algorithm") {
  const EnvConfig env = tiny_env();
  const HyperSet hyper = tiny_hyper();
  for (Algorithm algo : {Algorithm::Ppo, Algorithm::Td3, Algorithm::A3c}) {
    CAPTURE(algorithm_name(algo));
    TrainOptions opt;
    opt.episodes = 5;
    opt.seed = 3;
    const TrainResult a = train(algo, env, hyper, opt);
    const TrainResult b = train(algo, env, hyper, opt);
    REQUIRE(a.trace.episodes.size() == 5);
    CHECK(trace_csv(a.trace) == trace_csv(b.trace));
    const VectorXd s = VectorXd::Random(static_cast<Eigen::Index>(state_dim(env.system)));
    CHECK(a.agent->act(s) == b.agent->act(s));
    std::ostringstream ca, cb;
    a.agent->checkpoint().save(ca);
    b.agent->checkpoint().save(cb);
    CHECK(ca.str() == cb.str());

    opt.seed = 4;
    CHECK(trace_csv(train(algo, env, hyper, opt).trace) != trace_csv(a.trace));
  }
}

TEST_CASE("zero episodes produce an empty trace") {
  TrainOptions opt;
  const TrainResult r = train(Algorithm::Ppo, tiny_env(), tiny_hyper(), opt);
  CHECK(r.trace.episodes.empty());
  CHECK(r.agent != nullptr);
  CHECK(r.trace.tail_mean_reward(10) == 0.0);
}

TEST_CASE("a diverging optimizer aborts with the last good checkpoint") {
  HyperSet hyper = tiny_hyper();
  hyper.a3c.critic_lr = 1e300;
  hyper.a3c.actor_lr = 1e300;
  TrainOptions opt;
  opt.episodes = 20;
  opt.seed = 1;
  bool aborted = false;
  try {
    train(Algorithm::A3c, tiny_env(), hyper, opt);
  } catch (const TrainingAborted& e) {
    aborted = true;
    CHECK(e.trace().episodes.size() < 20);
    CHECK(e.last_good().contains("actor.mean"));
    CHECK(e.last_good().get_vector("actor.log_std").allFinite());
  }
  CHECK(aborted);
}

TEST_CASE("random policy trace") {
  const TrainingTrace a = random_policy_trace(tiny_env(), 4, 3, 9);
  const TrainingTrace b = random_policy_trace(tiny_env(), 4, 3, 9);
  REQUIRE(a.episodes.size() == 3);
  CHECK(trace_csv(a) == trace_csv(b));
  CHECK(a.tail_mean_reward(2) == Approx((a.episodes[1].mean_reward + a.episodes[2].mean_reward) / 2));
}

TEST_CASE("trace csv layout") {
  TrainingTrace t;
  t.episodes.push_back({0, 1.5, 0.25, 3.0});
  const std::string csv = trace_csv(t);
  CHECK(csv == "config_hash,seed,episode,mean_reward,min_rate,satisfied_count\nabc,7,0,1.5,0.25,3\n");
}

TEST_CASE("ppo update runs on a full rollout") {
  PpoHyper h = tiny_hyper().ppo;
  PpoAgent agent(4, 2, h, 3);
  Philox rng(1);
  for (int k = 0; k < h.rollout_steps; ++k) {
    const VectorXd s = agent.observe(VectorXd::Random(4), true);
    const auto smp = agent.sample(s);
    agent.store({s, smp.pre_tanh, smp.log_prob, rng.uniform(), agent.observe(VectorXd::Random(4), true), k % 5 == 4});
  }
  REQUIRE(agent.rollout_full());
  const VectorXd before = agent.actor().mean_net().params();
  const auto stats = agent.update();
  CHECK(std::isfinite(stats.surrogate));
  CHECK(std::isfinite(stats.critic_loss));
  CHECK(agent.rollout_size() == 0);
  CHECK(agent.actor().mean_net().params() != before);
}
