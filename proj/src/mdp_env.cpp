// SPDX-License-Identifier: Apache-2.0
#include "starsr/mdp_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "starsr/random.hpp"

namespace starsr {

namespace {

double clip_unit(double a) {
  if (std::isnan(a)) return 0.0;
  return std::clamp(a, -1.0, 1.0);
}

// [-1, 1] -> [0, 1]
double to_fraction(double a) { return 0.5 * (clip_unit(a) + 1.0); }
double from_fraction(double f) { return 2.0 * f - 1.0; }

double active_beta_max(const SystemConfig& cfg) {
  const double cap = cfg.p_asris_watts / 2.0;
  return cfg.active_gain_rule == ActiveGainRule::Squared ? std::sqrt(cap) : cap;
}

CMatrix decode_beams(const Eigen::VectorXd& a, int offset, int n, int users) {
  CMatrix w(n, users);
  for (int i = 0; i < users; ++i) {
    for (int k = 0; k < n; ++k) {
      const int base = offset + 2 * (i * n + k);
      w(k, i) = {clip_unit(a(base)), clip_unit(a(base + 1))};
    }
    const double norm = w.col(i).norm();
    if (norm > 0.0) {
      w.col(i) /= norm;
    } else {
      w.col(i).setZero();
      w(0, i) = 1.0;
    }
  }
  return w;
}

void encode_beams(const CMatrix& w, int offset, Eigen::VectorXd& a) {
  for (Eigen::Index i = 0; i < w.cols(); ++i) {
    for (Eigen::Index k = 0; k < w.rows(); ++k) {
      const auto base = offset + 2 * (i * w.rows() + k);
      a(base) = w(k, i).real();
      a(base + 1) = w(k, i).imag();
    }
  }
}

void append_block(const CMatrix& block, Eigen::VectorXd& out, Eigen::Index& pos) {
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      out(pos++) = block(r, c).real();
      out(pos++) = block(r, c).imag();
    }
  }
}

}  // namespace

ActionLayout::ActionLayout(const SystemConfig& cfg)
    : n(cfg.n_bs_antennas), m(cfg.n_ris_elements), users(cfg.n_pairs) {
  rate = 0;
  eta = 1;
  tau = eta + users;
  power = tau + users;
  w1 = power + users;
  w2 = w1 + 2 * n * users;
  beta_t = w2 + 2 * n * users;
  beta_r = beta_t + m;
  theta_t = beta_r + m;
  theta_r = theta_t + m;
  dim = theta_r + m;
}

std::size_t state_dim(const SystemConfig& cfg) {
  const std::size_t N = cfg.n_bs_antennas, M = cfg.n_ris_elements, I = cfg.n_pairs;
  return 2 * (N * I + N * I + M * N + N * I + I * M + I * M);
}

std::size_t action_dim(const SystemConfig& cfg) { return static_cast<std::size_t>(ActionLayout(cfg).dim); }

Eigen::VectorXd flatten_state(const ChannelRealization& ch) {
  const auto total = 2 * (ch.h1.size() + ch.g1.size() + ch.h2.size() + ch.h3.size() + ch.g2r.size() + ch.g2t.size());
  Eigen::VectorXd s(total);
  Eigen::Index pos = 0;
  for (const CMatrix* block : {&ch.h1, &ch.g1, &ch.h2, &ch.h3, &ch.g2r, &ch.g2t}) append_block(*block, s, pos);
  return s;
}

double rate_envelope(const ChannelRealization& ch, const SystemConfig& cfg) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < ch.h1.cols(); ++i) {
    best = std::max(best, ch.g1.col(i).squaredNorm() * ch.h1.col(i).squaredNorm());
  }
  const double snr =
      cfg.symbols_per_bd_symbol * cfg.p_bs_max_watts * best / (cfg.bandwidth_hz * cfg.noise_power_watts.bs);
  return cfg.bandwidth_hz * std::log2(1.0 + snr);
}

DecisionVariables decode_action(const Eigen::VectorXd& a, const SystemConfig& cfg, RisMode mode, double rate_cap) {
  const ActionLayout L(cfg);
  if (a.size() != L.dim) throw std::invalid_argument("decode_action: action has wrong dimension");
  DecisionVariables dv;
  dv.rate_target = to_fraction(a(L.rate)) * rate_cap;
  dv.eta.resize(L.users);
  dv.tau.resize(L.users);
  dv.power.resize(L.users);
  for (int i = 0; i < L.users; ++i) {
    dv.eta(i) = to_fraction(a(L.eta + i));
    dv.tau(i) = to_fraction(a(L.tau + i));
    dv.power(i) = to_fraction(a(L.power + i)) * cfg.p_bs_max_watts;
  }
  dv.w1 = decode_beams(a, L.w1, L.n, L.users);
  dv.w2 = decode_beams(a, L.w2, L.n, L.users);

  auto& ris = dv.ris;
  ris.mode = mode;
  ris.beta_t.resize(L.m);
  ris.beta_r.resize(L.m);
  ris.theta_t.resize(L.m);
  ris.theta_r.resize(L.m);
  const double beta_max = active_beta_max(cfg);
  for (int k = 0; k < L.m; ++k) {
    if (mode == RisMode::Active) {
      ris.beta_t(k) = to_fraction(a(L.beta_t + k)) * beta_max;
      ris.beta_r(k) = to_fraction(a(L.beta_r + k)) * beta_max;
    } else {
      ris.beta_t(k) = to_fraction(a(L.beta_t + k));
      ris.beta_r(k) = 1.0 - ris.beta_t(k);
    }
    ris.theta_t(k) = 2.0 * std::numbers::pi * to_fraction(a(L.theta_t + k));
    ris.theta_r(k) = 2.0 * std::numbers::pi * to_fraction(a(L.theta_r + k));
  }
  return dv;
}

Eigen::VectorXd encode_action(const DecisionVariables& dv, const SystemConfig& cfg, double rate_cap) {
  const ActionLayout L(cfg);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(L.dim);
  a(L.rate) = rate_cap > 0.0 ? from_fraction(dv.rate_target / rate_cap) : -1.0;
  for (int i = 0; i < L.users; ++i) {
    a(L.eta + i) = from_fraction(dv.eta(i));
    a(L.tau + i) = from_fraction(dv.tau(i));
    a(L.power + i) = from_fraction(dv.power(i) / cfg.p_bs_max_watts);
  }
  encode_beams(dv.w1, L.w1, a);
  encode_beams(dv.w2, L.w2, a);
  const double beta_max = active_beta_max(cfg);
  for (int k = 0; k < L.m; ++k) {
    if (dv.ris.mode == RisMode::Active) {
      a(L.beta_t + k) = from_fraction(dv.ris.beta_t(k) / beta_max);
      a(L.beta_r + k) = from_fraction(dv.ris.beta_r(k) / beta_max);
    } else {
      a(L.beta_t + k) = from_fraction(dv.ris.beta_t(k));
      a(L.beta_r + k) = from_fraction(dv.ris.beta_r(k));
    }
    // Phases are wrapped into [0, 2 pi] before encoding.
    const double two_pi = 2.0 * std::numbers::pi;
    auto wrap = [&](double t) {
      if (t >= 0.0 && t <= two_pi) return t;
      const double r = std::fmod(t, two_pi);
      return r < 0.0 ? r + two_pi : r;
    };
    a(L.theta_t + k) = from_fraction(wrap(dv.ris.theta_t(k)) / two_pi);
    a(L.theta_r + k) = from_fraction(wrap(dv.ris.theta_r(k)) / two_pi);
  }
  return a;
}

StepInfo evaluate_action(const Eigen::VectorXd& a, const ChannelRealization& ch, const EnvConfig& env) {
  const double cap = env.rate_cap > 0.0 ? env.rate_cap : rate_envelope(ch, env.system);
  StepInfo info;
  info.decision = decode_action(a, env.system, env.ris_mode, cap);
  info.rates = rate_report(ch, info.decision, env.system);
  info.objective = objective(info.rates);
  if (env.rate_mode == RateMode::DerivedR) info.decision.rate_target = info.objective;
  info.rate_used = info.decision.rate_target;
  info.constraints = evaluate_constraints(ch, info.decision, env.system, info.rates);
  return info;
}

double step_reward(const StepInfo& info, const EnvConfig& env) {
  return reward(info.rate_used, info.constraints, env.reward_mode, env.penalty);
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.system.validate();
  if (cfg_.episode_length < 1) throw std::invalid_argument("EnvConfig: episode_length >= 1");
}

Eigen::VectorXd Environment::reset(std::uint64_t seed) {
  episode_seed_ = seed;
  placement_ = place_nodes(cfg_.system, mix_seed({seed, 0}));
  channel_ = draw_realization(cfg_.system, placement_, mix_seed({seed, 1, 0}));
  t_ = 0;
  started_ = true;
  done_ = false;
  return flatten_state(channel_);
}

StepResult Environment::step(const Eigen::VectorXd& action) {
  if (!started_) throw std::logic_error("Environment::step called before reset");
  if (done_) throw std::logic_error("Environment::step called after the episode ended");
  StepResult res;
  res.info = evaluate_action(action, channel_, cfg_);
  res.reward = step_reward(res.info, cfg_);
  ++t_;
  done_ = t_ >= cfg_.episode_length;
  res.done = done_;
  channel_ = draw_realization(cfg_.system, placement_, mix_seed({episode_seed_, 1, static_cast<std::uint64_t>(t_)}));
  res.next_state = flatten_state(channel_);
  return res;
}

RunningNormalizer::RunningNormalizer(std::size_t dim, bool enabled)
    : enabled_(enabled),
      mean_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))),
      m2_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}

void RunningNormalizer::update(const Eigen::VectorXd& x) {
  if (!enabled_) return;
  count_ += 1.0;
  const Eigen::VectorXd delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta.cwiseProduct(x - mean_);
}

Eigen::VectorXd RunningNormalizer::normalize(const Eigen::VectorXd& x) const {
  if (!enabled_ || count_ < 2.0) return x;
  const Eigen::ArrayXd var = m2_.array() / count_;
  const Eigen::ArrayXd z = (x - mean_).array() / (var + 1e-300).sqrt();
  return z.max(-10.0).min(10.0).matrix();
}

void RunningNormalizer::restore(double count, Eigen::VectorXd mean, Eigen::VectorXd m2) {
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

void write_episode_trace_csv(std::ostream& out, const std::vector<StepRecord>& steps) {
  out << "step,reward,min_rate";
  for (std::size_t j = 0; j < kConstraintCount; ++j) out << ',' << constraint_name(static_cast<Constraint>(j));
  out << '\n';
  const auto old = out.precision(17);
  for (const auto& s : steps) {
    out << s.step << ',' << s.reward << ',' << s.min_rate;
    for (bool f : s.flags) out << ',' << (f ? 1 : 0);
    out << '\n';
  }
  out.precision(old);
}

}  // namespace starsr
