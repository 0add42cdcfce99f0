// SPDX-License-Identifier: Apache-2.0
#include "starsr/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace starsr {

using nlohmann::json;

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::string optimizer_name(nn::OptimizerKind k) { return k == nn::OptimizerKind::Adam ? "adam" : "sgd"; }

nn::OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return nn::OptimizerKind::Sgd;
  if (s == "adam") return nn::OptimizerKind::Adam;
  throw std::invalid_argument("unknown optimizer '" + s + "'");
}

void read_optimizer(const json& j, nn::OptimizerKind& out) {
  if (j.contains("optimizer")) out = parse_optimizer(j.at("optimizer").get<std::string>());
}

json ppo_json(const drl::PpoHyper& h) {
  return {{"actor_hidden", h.actor_hidden},   {"critic_hidden", h.critic_hidden},
          {"minibatch", h.minibatch},         {"actor_lr", h.actor_lr},
          {"critic_lr", h.critic_lr},         {"target_update", h.target_update},
          {"discount", h.discount},           {"entropy_coeff", h.entropy_coeff},
          {"episodes", h.episodes},           {"steps", h.steps},
          {"clip", h.clip},                   {"epochs", h.epochs},
          {"rollout_steps", h.rollout_steps}, {"optimizer", optimizer_name(h.optimizer)},
          {"normalize_advantages", h.normalize_advantages},
          {"normalize_observations", h.normalize_observations},
          {"init_log_std", h.init_log_std}};
}

json td3_json(const drl::Td3Hyper& h) {
  return {{"actor_hidden", h.actor_hidden},     {"critic_hidden", h.critic_hidden},
          {"minibatch", h.minibatch},           {"actor_lr", h.actor_lr},
          {"critic_lr", h.critic_lr},           {"target_update", h.target_update},
          {"discount", h.discount},             {"episodes", h.episodes},
          {"steps", h.steps},                   {"policy_delay", h.policy_delay},
          {"target_noise", h.target_noise},     {"noise_clip", h.noise_clip},
          {"explore_noise", h.explore_noise},   {"buffer_capacity", h.buffer_capacity},
          {"warmup_steps", h.warmup_steps},     {"train_every", h.train_every},
          {"optimizer", optimizer_name(h.optimizer)},
          {"normalize_observations", h.normalize_observations}};
}

json a3c_json(const drl::A3cHyper& h) {
  return {{"actor_hidden", h.actor_hidden}, {"critic_hidden", h.critic_hidden},
          {"minibatch", h.minibatch},       {"actor_lr", h.actor_lr},
          {"critic_lr", h.critic_lr},       {"target_update", h.target_update},
          {"discount", h.discount},         {"entropy_coeff", h.entropy_coeff},
          {"workers", h.workers},           {"episodes", h.episodes},
          {"steps", h.steps},               {"optimizer", optimizer_name(h.optimizer)},
          {"normalize_observations", h.normalize_observations},
          {"init_log_std", h.init_log_std}};
}

drl::PpoHyper ppo_from(const json& j) {
  drl::PpoHyper h;
  read_if(j, "actor_hidden", h.actor_hidden);
  read_if(j, "critic_hidden", h.critic_hidden);
  read_if(j, "minibatch", h.minibatch);
  read_if(j, "actor_lr", h.actor_lr);
  read_if(j, "critic_lr", h.critic_lr);
  read_if(j, "target_update", h.target_update);
  read_if(j, "discount", h.discount);
  read_if(j, "entropy_coeff", h.entropy_coeff);
  read_if(j, "episodes", h.episodes);
  read_if(j, "steps", h.steps);
  read_if(j, "clip", h.clip);
  read_if(j, "epochs", h.epochs);
  read_if(j, "rollout_steps", h.rollout_steps);
  read_optimizer(j, h.optimizer);
  read_if(j, "normalize_advantages", h.normalize_advantages);
  read_if(j, "normalize_observations", h.normalize_observations);
  read_if(j, "init_log_std", h.init_log_std);
  return h;
}

drl::Td3Hyper td3_from(const json& j) {
  drl::Td3Hyper h;
  read_if(j, "actor_hidden", h.actor_hidden);
  read_if(j, "critic_hidden", h.critic_hidden);
  read_if(j, "minibatch", h.minibatch);
  read_if(j, "actor_lr", h.actor_lr);
  read_if(j, "critic_lr", h.critic_lr);
  read_if(j, "target_update", h.target_update);
  read_if(j, "discount", h.discount);
  read_if(j, "episodes", h.episodes);
  read_if(j, "steps", h.steps);
  read_if(j, "policy_delay", h.policy_delay);
  read_if(j, "target_noise", h.target_noise);
  read_if(j, "noise_clip", h.noise_clip);
  read_if(j, "explore_noise", h.explore_noise);
  read_if(j, "buffer_capacity", h.buffer_capacity);
  read_if(j, "warmup_steps", h.warmup_steps);
  read_if(j, "train_every", h.train_every);
  read_optimizer(j, h.optimizer);
  read_if(j, "normalize_observations", h.normalize_observations);
  return h;
}

drl::A3cHyper a3c_from(const json& j) {
  drl::A3cHyper h;
  read_if(j, "actor_hidden", h.actor_hidden);
  read_if(j, "critic_hidden", h.critic_hidden);
  read_if(j, "minibatch", h.minibatch);
  read_if(j, "actor_lr", h.actor_lr);
  read_if(j, "critic_lr", h.critic_lr);
  read_if(j, "target_update", h.target_update);
  read_if(j, "discount", h.discount);
  read_if(j, "entropy_coeff", h.entropy_coeff);
  read_if(j, "workers", h.workers);
  read_if(j, "episodes", h.episodes);
  read_if(j, "steps", h.steps);
  read_optimizer(j, h.optimizer);
  read_if(j, "normalize_observations", h.normalize_observations);
  read_if(j, "init_log_std", h.init_log_std);
  return h;
}

EnvConfig env_from(const json& j, EnvConfig env) {
  if (j.contains("ris_mode")) {
    const auto s = j.at("ris_mode").get<std::string>();
    if (s == "active") env.ris_mode = RisMode::Active;
    else if (s == "passive") env.ris_mode = RisMode::Passive;
    else throw std::invalid_argument("ris_mode must be 'active' or 'passive'");
  }
  if (j.contains("rate_mode")) {
    const auto s = j.at("rate_mode").get<std::string>();
    if (s == "literal") env.rate_mode = RateMode::LiteralR;
    else if (s == "derived") env.rate_mode = RateMode::DerivedR;
    else throw std::invalid_argument("rate_mode must be 'literal' or 'derived'");
  }
  if (j.contains("reward_mode")) {
    const auto s = j.at("reward_mode").get<std::string>();
    if (s == "literal") env.reward_mode = RewardMode::Literal;
    else if (s == "penalty") env.reward_mode = RewardMode::Penalty;
    else throw std::invalid_argument("reward_mode must be 'literal' or 'penalty'");
  }
  read_if(j, "penalty", env.penalty);
  read_if(j, "episode_length", env.episode_length);
  read_if(j, "rate_cap", env.rate_cap);
  return env;
}

json env_json(const EnvConfig& env) {
  return {{"ris_mode", env.ris_mode == RisMode::Active ? "active" : "passive"},
          {"rate_mode", env.rate_mode == RateMode::LiteralR ? "literal" : "derived"},
          {"reward_mode", env.reward_mode == RewardMode::Literal ? "literal" : "penalty"},
          {"penalty", env.penalty},
          {"episode_length", env.episode_length},
          {"rate_cap", env.rate_cap}};
}

}  // namespace

json to_json(const drl::HyperSet& h) { return {{"ppo", ppo_json(h.ppo)}, {"td3", td3_json(h.td3)}, {"a3c", a3c_json(h.a3c)}}; }

drl::HyperSet hyper_set_from_json(const json& j) {
  drl::HyperSet h;
  if (j.contains("ppo")) h.ppo = ppo_from(j.at("ppo"));
  if (j.contains("td3")) h.td3 = td3_from(j.at("td3"));
  if (j.contains("a3c")) h.a3c = a3c_from(j.at("a3c"));
  return h;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  if (j.contains("system")) cfg.env.system = system_config_from_json(j.at("system"));
  if (j.contains("env")) cfg.env = env_from(j.at("env"), cfg.env);
  cfg.hyper = hyper_set_from_json(j);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    read_if(t, "desk_episodes", cfg.train.desk_episodes);
    read_if(t, "paper_scale", cfg.train.paper_scale);
    read_if(t, "checkpoint_every", cfg.train.checkpoint_every);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    read_if(s, "name", cfg.sweep.name);
    read_if(s, "variable", cfg.sweep.variable);
    read_if(s, "values", cfg.sweep.values);
    read_if(s, "paired_modes", cfg.sweep.paired_modes);
    read_if(s, "channels", cfg.sweep.channels);
    read_if(s, "method", cfg.sweep.method);
    read_if(s, "budget", cfg.sweep.budget);
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    read_if(o, "eta", cfg.oracle.eta);
    read_if(o, "tau", cfg.oracle.tau);
    read_if(o, "power", cfg.oracle.power);
    read_if(o, "phase", cfg.oracle.phase);
    read_if(o, "beta", cfg.oracle.beta);
    read_if(o, "channel_seed", cfg.oracle.channel_seed);
    read_if(o, "cap", cfg.oracle.cap);
  }
  read_if(j, "seeds", cfg.seeds);
  read_if(j, "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j = to_json(cfg.hyper);
  j["system"] = to_json(cfg.env.system);
  j["env"] = env_json(cfg.env);
  j["train"] = {{"desk_episodes", cfg.train.desk_episodes},
                {"paper_scale", cfg.train.paper_scale},
                {"checkpoint_every", cfg.train.checkpoint_every}};
  j["sweep"] = {{"name", cfg.sweep.name},         {"variable", cfg.sweep.variable},
                {"values", cfg.sweep.values},     {"paired_modes", cfg.sweep.paired_modes},
                {"channels", cfg.sweep.channels}, {"method", cfg.sweep.method},
                {"budget", cfg.sweep.budget}};
  j["oracle"] = {{"eta", cfg.oracle.eta},     {"tau", cfg.oracle.tau},
                 {"power", cfg.oracle.power}, {"phase", cfg.oracle.phase},
                 {"beta", cfg.oracle.beta},
                 {"channel_seed", cfg.oracle.channel_seed}, {"cap", cfg.oracle.cap}};
  j["seeds"] = cfg.seeds;
  j["output_dir"] = cfg.output_dir;
  return j;
}

void RunConfig::validate() const {
  env.system.validate();
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (train.desk_episodes < 0) throw std::invalid_argument("train.desk_episodes must be >= 0");
  if (sweep.channels < 1) throw std::invalid_argument("sweep.channels must be >= 1");
  if (sweep.budget < 1) throw std::invalid_argument("sweep.budget must be >= 1");
  if (env.episode_length < 1) throw std::invalid_argument("env.episode_length must be >= 1");
  const auto& p = hyper.ppo;
  if (!(p.clip > 0.0 && p.clip < 1.0)) throw std::invalid_argument("ppo.clip must lie in (0, 1)");
  if (!(p.discount >= 0.0 && p.discount < 1.0)) throw std::invalid_argument("ppo.discount must lie in [0, 1)");
  if (p.minibatch < 1 || p.epochs < 1 || p.rollout_steps < 1 || p.steps < 1)
    throw std::invalid_argument("ppo minibatch, epochs, rollout_steps and steps must be >= 1");
  const auto& t = hyper.td3;
  if (!(t.discount >= 0.0 && t.discount < 1.0)) throw std::invalid_argument("td3.discount must lie in [0, 1)");
  if (t.buffer_capacity <= t.minibatch) throw std::invalid_argument("td3.buffer_capacity must exceed minibatch");
  if (t.policy_delay < 1 || t.steps < 1 || t.train_every < 1)
    throw std::invalid_argument("td3 policy_delay, steps and train_every must be >= 1");
  if (!(t.target_update > 0.0 && t.target_update < 1.0)) throw std::invalid_argument("td3.target_update must lie in (0, 1)");
  const auto& a = hyper.a3c;
  if (a.workers < 1 || a.minibatch < 1 || a.steps < 1) throw std::invalid_argument("a3c workers, minibatch and steps must be >= 1");
  if (a.entropy_coeff < 0.0) throw std::invalid_argument("a3c.entropy_coeff must be >= 0");
  if (!(a.discount >= 0.0 && a.discount < 1.0)) throw std::invalid_argument("a3c.discount must lie in [0, 1)");
  for (double v : sweep.values) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep values must be positive");
  }
}

int RunConfig::episodes(drl::Algorithm algo) const {
  if (!train.paper_scale) return train.desk_episodes;
  switch (algo) {
    case drl::Algorithm::Ppo: return hyper.ppo.episodes;
    case drl::Algorithm::Td3: return hyper.td3.episodes;
    case drl::Algorithm::A3c: return hyper.a3c.episodes;
  }
  return 0;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  return run_config_from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace starsr
