// SPDX-License-Identifier: Apache-2.0
#include "starsr/train.hpp"

#include <filesystem>
#include <optional>

#include "starsr/a3c.hpp"
#include "starsr/ppo.hpp"
#include "starsr/td3.hpp"

namespace starsr::drl {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Ppo: return "ppo";
    case Algorithm::Td3: return "td3";
    case Algorithm::A3c: return "a3c";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ppo") return Algorithm::Ppo;
  if (name == "td3") return Algorithm::Td3;
  if (name == "a3c") return Algorithm::A3c;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected ppo, td3 or a3c)");
}

std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return mix_seed({seed, 0x657069736f6465ULL, static_cast<std::uint64_t>(episode)});
}

int episode_steps(Algorithm algo, const HyperSet& hyper) {
  switch (algo) {
    case Algorithm::Ppo: return hyper.ppo.steps;
    case Algorithm::Td3: return hyper.td3.steps;
    case Algorithm::A3c: return hyper.a3c.steps;
  }
  return 0;
}

namespace {

void maybe_checkpoint(const Agent& agent, const TrainOptions& opt, int episode) {
  if (opt.checkpoint_every <= 0 || opt.checkpoint_dir.empty() || (episode + 1) % opt.checkpoint_every != 0) return;
  std::filesystem::create_directories(opt.checkpoint_dir);
  agent.checkpoint().save_file(
      (std::filesystem::path(opt.checkpoint_dir) / ("checkpoint_" + std::to_string(episode + 1) + ".ckpt")).string());
}

// Runs the per-episode body and converts optimizer failures into TrainingAborted.
template <class Body>
void run_loop(Agent& agent, const TrainOptions& opt, TrainingTrace& trace, Body&& body) {
  nn::Checkpoint last_good = agent.checkpoint();
  for (int e = 0; e < opt.episodes; ++e) {
    EpisodeStats stats;
    try {
      stats = body(e);
    } catch (const std::runtime_error& err) {
      throw TrainingAborted(std::string("training aborted at episode ") + std::to_string(e) + ": " + err.what(),
                            trace, last_good);
    }
    trace.episodes.push_back(stats);
    last_good = agent.checkpoint();
    maybe_checkpoint(agent, opt, e);
  }
}

EnvConfig with_length(EnvConfig env, int steps) {
  env.episode_length = steps;
  return env;
}

}  // namespace

TrainResult train(Algorithm algo, const EnvConfig& env_in, const HyperSet& hyper, const TrainOptions& opt) {
  const EnvConfig env_cfg = with_length(env_in, episode_steps(algo, hyper));
  const int sdim = static_cast<int>(state_dim(env_cfg.system));
  const int adim = static_cast<int>(action_dim(env_cfg.system));
  TrainResult result;

  switch (algo) {
    case Algorithm::Ppo: {
      auto agent = std::make_unique<PpoAgent>(sdim, adim, hyper.ppo, opt.seed);
      Environment env(env_cfg);
      run_loop(*agent, opt, result.trace, [&](int e) {
        EpisodeAccumulator acc;
        VectorXd s = agent->observe(env.reset(episode_seed(opt.seed, e)), true);
        bool done = false;
        while (!done) {
          const nn::PolicySample smp = agent->sample(s);
          StepResult step = env.step(smp.action);
          acc.add(step);
          done = step.done;
          VectorXd s_next = agent->observe(step.next_state, true);
          agent->store({s, smp.pre_tanh, smp.log_prob, step.reward, s_next, done});
          if (agent->rollout_full()) agent->update();
          s = std::move(s_next);
        }
        return acc.finish(e);
      });
      result.agent = std::move(agent);
      break;
    }
    case Algorithm::Td3: {
      auto agent = std::make_unique<Td3Agent>(sdim, adim, hyper.td3, opt.seed);
      Environment env(env_cfg);
      long long global_step = 0;
      const int every = std::max(1, hyper.td3.train_every);
      run_loop(*agent, opt, result.trace, [&](int e) {
        EpisodeAccumulator acc;
        VectorXd s = agent->observe(env.reset(episode_seed(opt.seed, e)), true);
        bool done = false;
        while (!done) {
          const VectorXd a = agent->explore(s);
          StepResult step = env.step(a);
          acc.add(step);
          done = step.done;
          VectorXd s_next = agent->observe(step.next_state, true);
          agent->store(s, a, step.reward, s_next, done);
          ++global_step;
          if (agent->ready() && global_step > hyper.td3.warmup_steps && global_step % every == 0) agent->update();
          s = std::move(s_next);
        }
        return acc.finish(e);
      });
      result.agent = std::move(agent);
      break;
    }
    case Algorithm::A3c: {
      auto agent = std::make_unique<A3cAgent>(sdim, adim, hyper.a3c, opt.seed);
      run_loop(*agent, opt, result.trace,
               [&](int e) { return agent->run_episode(env_cfg, episode_seed(opt.seed, e), e); });
      result.agent = std::move(agent);
      break;
    }
  }
  return result;
}

TrainingTrace random_policy_trace(const EnvConfig& env_in, int steps, int episodes, std::uint64_t seed) {
  Environment env(with_length(env_in, steps));
  Philox rng(seed, 0x72616e64ULL);
  const auto adim = static_cast<Eigen::Index>(env.action_size());
  TrainingTrace trace;
  for (int e = 0; e < episodes; ++e) {
    EpisodeAccumulator acc;
    env.reset(episode_seed(seed, e));
    bool done = false;
    while (!done) {
      VectorXd a(adim);
      for (Eigen::Index d = 0; d < adim; ++d) a(d) = rng.uniform(-1.0, 1.0);
      const StepResult step = env.step(a);
      acc.add(step);
      done = step.done;
    }
    trace.episodes.push_back(acc.finish(e));
  }
  return trace;
}

}  // namespace starsr::drl
