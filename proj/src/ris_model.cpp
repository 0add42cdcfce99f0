// SPDX-License-Identifier: Apache-2.0
#include "starsr/ris_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starsr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_phase_margin(const Eigen::VectorXd& theta) {
  if (!theta.allFinite()) return -kInf;
  double slack = kInf;
  for (double t : theta) slack = std::min({slack, t, kTwoPi - t});
  return slack;
}

}  // namespace

CVector ris_diagonal(const RisCoefficients& c, RisSide side) {
  const auto& beta = side == RisSide::Transmit ? c.beta_t : c.beta_r;
  const auto& theta = side == RisSide::Transmit ? c.theta_t : c.theta_r;
  CVector d(beta.size());
  for (Eigen::Index m = 0; m < beta.size(); ++m) d(m) = std::polar(std::sqrt(beta(m)), theta(m));
  return d;
}

CMatrix beamforming_matrix(const RisCoefficients& c, RisSide side) {
  const auto M = c.beta_t.size();
  if (c.beta_r.size() != M || c.theta_t.size() != M || c.theta_r.size() != M) {
    throw std::invalid_argument("RisCoefficients: vector lengths differ");
  }
  if ((c.beta_t.array() < 0.0).any() || (c.beta_r.array() < 0.0).any() || !c.beta_t.allFinite() ||
      !c.beta_r.allFinite()) {
    throw std::invalid_argument("RisCoefficients: beta must be finite and nonnegative");
  }
  if (min_phase_margin(c.theta_t) < 0.0 || min_phase_margin(c.theta_r) < 0.0) {
    throw std::invalid_argument("RisCoefficients: phase outside [0, 2pi] (11d)");
  }
  if (c.mode == RisMode::Passive &&
      ((c.beta_t + c.beta_r).array() - 1.0).abs().maxCoeff() > kPassiveSplitTolerance) {
    throw std::invalid_argument("RisCoefficients: passive mode requires beta_t + beta_r = 1 (11b)");
  }
  return ris_diagonal(c, side).asDiagonal();
}

RisCoefficients equal_energy_split(const SystemConfig& cfg, const Eigen::VectorXd& theta_t,
                                   const Eigen::VectorXd& theta_r) {
  const auto M = theta_t.size();
  const double beta = cfg.p_asris_watts / 2.0;
  return {Eigen::VectorXd::Constant(M, beta), Eigen::VectorXd::Constant(M, beta), theta_t, theta_r,
          RisMode::Active};
}

RisCoefficients passive_equal_split(const Eigen::VectorXd& theta_t, const Eigen::VectorXd& theta_r) {
  const auto M = theta_t.size();
  return {Eigen::VectorXd::Constant(M, 0.5), Eigen::VectorXd::Constant(M, 0.5), theta_t, theta_r,
          RisMode::Passive};
}

RisFlags validate(const RisCoefficients& c, const SystemConfig& cfg) {
  RisFlags f;
  if (c.mode == RisMode::Passive) {
    const double deviation = ((c.beta_t + c.beta_r).array() - 1.0).abs().maxCoeff();
    const double nonneg = std::min(c.beta_t.minCoeff(), c.beta_r.minCoeff());
    f.passive_split_slack = std::min(kPassiveSplitTolerance - deviation, nonneg);
    if (!c.beta_t.allFinite() || !c.beta_r.allFinite()) f.passive_split_slack = -kInf;
    f.passive_split = f.passive_split_slack >= 0.0;
  } else {
    const double cap = cfg.p_asris_watts / 2.0;
    const auto gain = [&](double b) { return cfg.active_gain_rule == ActiveGainRule::Squared ? b * b : b; };
    double slack = kInf;
    for (Eigen::Index m = 0; m < c.beta_t.size(); ++m) {
      slack = std::min({slack, cap - gain(c.beta_t(m)), cap - gain(c.beta_r(m))});
    }
    if (!c.beta_t.allFinite() || !c.beta_r.allFinite()) slack = -kInf;
    f.active_amplitude_slack = slack;
    f.active_amplitude = slack >= 0.0;
  }
  f.phase_range_slack = std::min(min_phase_margin(c.theta_t), min_phase_margin(c.theta_r));
  f.phase_range = f.phase_range_slack >= 0.0;
  return f;
}

}  // namespace starsr
