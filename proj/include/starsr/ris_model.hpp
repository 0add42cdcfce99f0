// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "starsr/network_model.hpp"

namespace starsr {

enum class RisMode { Active, Passive };
enum class RisSide { Transmit, Reflect };

/// Per-element power gains (beta) and phases (theta) for both sides of the surface.
/// The element response is sqrt(beta) * exp(j theta).
struct RisCoefficients {
  Eigen::VectorXd beta_t;
  Eigen::VectorXd beta_r;
  Eigen::VectorXd theta_t;
  Eigen::VectorXd theta_r;
  RisMode mode = RisMode::Active;

  int size() const { return static_cast<int>(beta_t.size()); }
};

/// Absolute tolerance on beta_t + beta_r = 1 in passive mode.
inline constexpr double kPassiveSplitTolerance = 1e-12;

struct RisFlags {
  bool passive_split = true;     // 11b, vacuous in active mode
  bool active_amplitude = true;  // 11c, vacuous in passive mode
  bool phase_range = true;       // 11d
  double passive_split_slack = 0.0;
  double active_amplitude_slack = 0.0;
  double phase_range_slack = 0.0;
};

/// Diagonal of Theta_side without validation.
CVector ris_diagonal(const RisCoefficients& c, RisSide side);

/// Theta_side = diag(sqrt(beta) e^{j theta}). Throws std::invalid_argument if the
/// coefficients break a configuration-independent invariant (sizes, beta >= 0,
/// phase range, passive split).
CMatrix beamforming_matrix(const RisCoefficients& c, RisSide side);

/// Active equal-energy split: beta_t = beta_r = p_ASRIS / 2 on every element.
RisCoefficients equal_energy_split(const SystemConfig& cfg, const Eigen::VectorXd& theta_t,
                                   const Eigen::VectorXd& theta_r);

/// Passive equal split: beta_t = beta_r = 1/2.
RisCoefficients passive_equal_split(const Eigen::VectorXd& theta_t, const Eigen::VectorXd& theta_r);

RisFlags validate(const RisCoefficients& c, const SystemConfig& cfg);

}  // namespace starsr
