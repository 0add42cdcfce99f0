// SPDX-License-Identifier: Apache-2.0
#include "starsr/sr_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace starsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double unit_interval_margin(const Eigen::VectorXd& v, double upper) {
  if (!v.allFinite()) return -kInf;
  double slack = kInf;
  for (double x : v) slack = std::min({slack, x, upper - x});
  return slack;
}

// Smallest consecutive drop along the decode order; 0 for a single user.
double ordering_margin(const Eigen::VectorXd& rates, const std::vector<int>& order) {
  if (order.size() < 2) return 0.0;
  double slack = kInf;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double d = rates(order[k]) - rates(order[k + 1]);
    if (std::isnan(d)) return -kInf;
    slack = std::min(slack, d);
  }
  return slack;
}

double target_margin(const Eigen::VectorXd& rates, double target) {
  double slack = kInf;
  for (double r : rates) {
    if (std::isnan(r - target)) return -kInf;
    slack = std::min(slack, r - target);
  }
  return slack;
}

}  // namespace

std::string_view constraint_name(Constraint c) {
  switch (c) {
    case Constraint::PassiveSplit: return "c1_passive_split";
    case Constraint::ActiveAmplitude: return "c2_active_amplitude";
    case Constraint::PhaseRange: return "c3_phase_range";
    case Constraint::PowerCap: return "c4_power_cap";
    case Constraint::EtaRange: return "c5_eta_range";
    case Constraint::TauRange: return "c6_tau_range";
    case Constraint::EnergyHarvest: return "c7_energy_harvest";
    case Constraint::SicPhase1: return "c8_sic_phase1";
    case Constraint::SicPhase2: return "c9_sic_phase2";
    case Constraint::RatePhase1: return "c10_rate_phase1";
    case Constraint::RatePhase2: return "c11_rate_phase2";
  }
  return "unknown";
}

int ConstraintReport::satisfied() const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

double harvested_energy(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg, int i) {
  const double incident = std::norm(ch.h1.col(i).dot(dv.w1.col(i)));
  return cfg.energy_conversion_efficiency * dv.power(i) * (1.0 - dv.eta(i)) * (1.0 - dv.tau(i)) * incident;
}

ConstraintReport evaluate_constraints(const ChannelRealization& ch, const DecisionVariables& dv,
                                      const SystemConfig& cfg, const RateReport& rates) {
  ConstraintReport rep;
  auto set = [&](Constraint c, double slack) {
    if (std::isnan(slack)) slack = -kInf;
    rep.slacks[static_cast<std::size_t>(c)] = slack;
    rep.flags[static_cast<std::size_t>(c)] = slack >= 0.0;
  };

  const RisFlags ris = validate(dv.ris, cfg);
  set(Constraint::PassiveSplit, ris.passive_split_slack);
  set(Constraint::ActiveAmplitude, ris.active_amplitude_slack);
  set(Constraint::PhaseRange, ris.phase_range_slack);
  set(Constraint::PowerCap, unit_interval_margin(dv.power, cfg.p_bs_max_watts));
  set(Constraint::EtaRange, unit_interval_margin(dv.eta, 1.0));
  set(Constraint::TauRange, unit_interval_margin(dv.tau, 1.0));

  double harvest = kInf;
  for (int i = 0; i < static_cast<int>(dv.power.size()); ++i) {
    harvest = std::min(harvest, harvested_energy(ch, dv, cfg, i) - cfg.harvest_threshold_joules);
  }
  set(Constraint::EnergyHarvest, harvest);

  set(Constraint::SicPhase1, ordering_margin(rates.r1, rates.order1));
  set(Constraint::SicPhase2,
      std::min(ordering_margin(rates.r2r, rates.order2r), ordering_margin(rates.r2t, rates.order2t)));
  set(Constraint::RatePhase1, target_margin(rates.r1, dv.rate_target));
  set(Constraint::RatePhase2,
      std::min(target_margin(rates.r2r, dv.rate_target), target_margin(rates.r2t, dv.rate_target)));
  return rep;
}

double objective(const RateReport& rates) {
  return std::min({rates.r1.minCoeff(), rates.r2r.minCoeff(), rates.r2t.minCoeff()});
}

double reward(double objective_value, const ConstraintReport& report, RewardMode mode, double penalty) {
  const int satisfied = report.satisfied();
  if (mode == RewardMode::Literal) return objective_value * (1.0 + satisfied);
  return objective_value - penalty * (static_cast<int>(kConstraintCount) - satisfied);
}

}  // namespace starsr
