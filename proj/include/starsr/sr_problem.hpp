// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "starsr/phy_rates.hpp"

namespace starsr {

/// Fixed indices of the eleven constraints summed by the reward.
enum class Constraint : int {
  PassiveSplit = 0,  // C1: 11b, beta_t + beta_r = 1 (passive only)
  ActiveAmplitude,   // C2: 11c, beta <= p_ASRIS / 2 (active only)
  PhaseRange,        // C3: 11d, 0 <= theta <= 2 pi
  PowerCap,          // C4: 0 <= P_i <= p_BS
  EtaRange,          // C5: 0 <= eta_i <= 1
  TauRange,          // C6: 0 <= tau_i <= 1
  EnergyHarvest,     // C7: 11g
  SicPhase1,         // C8: 11h
  SicPhase2,         // C9: 11i, reflect and transmit
  RatePhase1,        // C10: 12b
  RatePhase2,        // C11: 12c and 12d
};

inline constexpr std::size_t kConstraintCount = 11;

std::string_view constraint_name(Constraint c);

/// Flag j holds exactly when slack j is nonnegative. Constraints that do not
/// apply (11b in active mode, SIC ordering with one user) hold with slack 0.
struct ConstraintReport {
  std::array<bool, kConstraintCount> flags{};
  std::array<double, kConstraintCount> slacks{};

  bool flag(Constraint c) const { return flags[static_cast<std::size_t>(c)]; }
  double slack(Constraint c) const { return slacks[static_cast<std::size_t>(c)]; }
  int satisfied() const;
  bool all_satisfied() const { return satisfied() == static_cast<int>(kConstraintCount); }
};

enum class RewardMode { Literal, Penalty };

/// Gamma P_i (1 - eta_i) (1 - tau_i) |h_1i^H w_1i|^2.
double harvested_energy(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg, int i);

/// Evaluates all eleven constraints. The SIC ordering constraints compare
/// consecutive users in the decode order and accept ties. The rate-target
/// constraints compare R against the already computed rates, which is the
/// same inequality as 2^(K R / (B tau)) - 1 <= SINR rearranged.
ConstraintReport evaluate_constraints(const ChannelRealization& ch, const DecisionVariables& dv,
                                      const SystemConfig& cfg, const RateReport& rates);

/// Max-min objective: the smallest of all 3I rates.
double objective(const RateReport& rates);

/// Literal: R (1 + #satisfied). Penalty: R - penalty * #violated.
double reward(double objective_value, const ConstraintReport& report, RewardMode mode = RewardMode::Literal,
              double penalty = 1.0);

}  // namespace starsr
