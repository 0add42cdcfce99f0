// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "starsr/sr_problem.hpp"

namespace starsr {

/// Literal: R is part of the action and checked by 12b-12d.
/// Derived: R is replaced by the achieved min rate before the constraints are evaluated.
enum class RateMode { LiteralR, DerivedR };

struct EnvConfig {
  SystemConfig system{};
  RisMode ris_mode = RisMode::Active;
  RateMode rate_mode = RateMode::LiteralR;
  RewardMode reward_mode = RewardMode::Literal;
  double penalty = 1.0;
  int episode_length = 200;
  /// Upper end of the decoded rate target. Zero selects the per-realization envelope.
  double rate_cap = 0.0;

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Offsets of each variable group inside the flat action vector:
/// [R | eta (I) | tau (I) | P (I) | w1 (2NI) | w2 (2NI) | beta_t (M) | beta_r (M) | theta_t (M) | theta_r (M)].
/// Beamformer entries are stored per user as interleaved (re, im) pairs.
struct ActionLayout {
  explicit ActionLayout(const SystemConfig& cfg);

  int n = 0, m = 0, users = 0;
  int rate = 0, eta = 0, tau = 0, power = 0, w1 = 0, w2 = 0;
  int beta_t = 0, beta_r = 0, theta_t = 0, theta_r = 0;
  int dim = 0;
};

/// Channel blocks h1, g1, h2, h3, g2r, g2t, each column-major with interleaved (re, im).
std::size_t state_dim(const SystemConfig& cfg);
std::size_t action_dim(const SystemConfig& cfg);
Eigen::VectorXd flatten_state(const ChannelRealization& ch);

/// B log2(1 + K p_BS max_i(||g_1i||^2 ||h_1i||^2) / (B sigma_BS^2)), an upper
/// envelope of every achievable min rate for this realization.
double rate_envelope(const ChannelRealization& ch, const SystemConfig& cfg);

/// Affine decode of a [-1, 1]^D action. Components are clipped first (NaN reads as 0).
DecisionVariables decode_action(const Eigen::VectorXd& a, const SystemConfig& cfg, RisMode mode, double rate_cap);

/// Inverse of decode_action for in-range decision variables.
Eigen::VectorXd encode_action(const DecisionVariables& dv, const SystemConfig& cfg, double rate_cap);

struct StepInfo {
  DecisionVariables decision;
  RateReport rates;
  ConstraintReport constraints;
  double objective = 0.0;
  double rate_used = 0.0;
};

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Evaluates one decoded action on a fixed realization (no episode bookkeeping).
StepInfo evaluate_action(const Eigen::VectorXd& a, const ChannelRealization& ch, const EnvConfig& env);
double step_reward(const StepInfo& info, const EnvConfig& env);

/// Episodic environment. Each reset draws a placement; every step draws a fresh
/// channel realization for the next state. Single-threaded per instance.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  Eigen::VectorXd reset(std::uint64_t seed);
  /// Throws std::logic_error if called before reset or after the episode ended.
  StepResult step(const Eigen::VectorXd& action);

  const EnvConfig& config() const { return cfg_; }
  const ChannelRealization& realization() const { return channel_; }
  const Placement& placement() const { return placement_; }
  int steps_taken() const { return t_; }
  std::size_t state_size() const { return state_dim(cfg_.system); }
  std::size_t action_size() const { return action_dim(cfg_.system); }

 private:
  EnvConfig cfg_;
  Placement placement_;
  ChannelRealization channel_;
  std::uint64_t episode_seed_ = 0;
  int t_ = 0;
  bool started_ = false;
  bool done_ = false;
};

/// Running mean/variance standardizer (Welford).
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(std::size_t dim, bool enabled = true);

  void update(const Eigen::VectorXd& x);
  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
  bool enabled() const { return enabled_; }
  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& m2() const { return m2_; }
  void restore(double count, Eigen::VectorXd mean, Eigen::VectorXd m2);

 private:
  bool enabled_ = true;
  double count_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
};

struct StepRecord {
  int step = 0;
  double reward = 0.0;
  double min_rate = 0.0;
  std::array<bool, kConstraintCount> flags{};
};

void write_episode_trace_csv(std::ostream& out, const std::vector<StepRecord>& steps);

}  // namespace starsr
