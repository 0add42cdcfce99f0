// SPDX-License-Identifier: Apache-2.0
#include "starsr/baselines.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "starsr/random.hpp"

namespace starsr {

ChannelRealization realize(const EnvSpec& spec) {
  const Placement placement = place_nodes(spec.env.system, mix_seed({spec.channel_seed, 0}));
  return draw_realization(spec.env.system, placement, mix_seed({spec.channel_seed, 1, 0}));
}

namespace {

double sum_rates(const RateReport& r) { return r.r1.sum() + r.r2r.sum() + r.r2t.sum(); }

}  // namespace

SearchResult random_search(const EnvSpec& spec, int budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");
  EnvConfig env = spec.env;
  env.rate_mode = RateMode::DerivedR;
  const ChannelRealization ch = realize(spec);
  const auto adim = static_cast<Eigen::Index>(action_dim(env.system));
  Philox rng(seed, 0x72737263ULL);
  SearchResult best;
  Eigen::VectorXd a(adim);
  for (int k = 0; k < budget; ++k) {
    for (Eigen::Index d = 0; d < adim; ++d) a(d) = rng.uniform(-1.0, 1.0);
    StepInfo info = evaluate_action(a, ch, env);
    if (!info.constraints.all_satisfied()) continue;
    ++best.feasible_count;
    if (!best.feasible || info.objective > best.objective) {
      best.feasible = true;
      best.objective = info.objective;
      best.sum_rate = sum_rates(info.rates);
      best.best = std::move(info.decision);
      best.best_index = k;
    }
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: n must be >= 1");
  if (n == 1) return {hi};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

GridSpec GridSpec::uniform(const SystemConfig& cfg, RisMode mode, int eta, int tau, int power, int phase, int beta) {
  GridSpec g;
  g.eta = linspace(0.0, 1.0, eta);
  g.tau = linspace(0.0, 1.0, tau);
  g.power = linspace(0.0, cfg.p_bs_max_watts, power);
  std::vector<double> ph(static_cast<std::size_t>(phase));
  for (int k = 0; k < phase; ++k) ph[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / phase;
  g.theta_t = ph;
  g.theta_r = ph;
  if (mode == RisMode::Passive) {
    g.beta_t = linspace(0.0, 1.0, beta);
    g.beta_r = {0.0};
  } else {
    const double amp = cfg.p_asris_watts / 2.0;
    const double top = cfg.active_gain_rule == ActiveGainRule::Squared ? std::sqrt(amp) : amp;
    g.beta_t = linspace(0.0, top, beta);
    g.beta_r = g.beta_t;
  }
  return g;
}

double GridSpec::size(RisMode mode) const {
  const double br = mode == RisMode::Passive ? 1.0 : static_cast<double>(beta_r.size());
  return static_cast<double>(eta.size()) * static_cast<double>(tau.size()) * static_cast<double>(power.size()) *
         static_cast<double>(theta_t.size()) * static_cast<double>(theta_r.size()) *
         static_cast<double>(beta_t.size()) * br;
}

GridTooLarge::GridTooLarge(double points, double cap)
    : std::length_error([&] {
        std::ostringstream os;
        os << "grid has " << points << " points, exceeding the cap of " << cap;
        return os.str();
      }()),
      points_(points) {}

SearchResult grid_oracle(const EnvSpec& spec, const GridSpec& grid) {
  const SystemConfig& cfg = spec.env.system;
  if (cfg.n_bs_antennas != 1 || cfg.n_ris_elements != 1 || cfg.n_pairs != 1)
    throw std::invalid_argument("grid_oracle: only N = M = I = 1 instances are supported");
  const RisMode mode = spec.env.ris_mode;
  const double points = grid.size(mode);
  if (points > grid.cap) throw GridTooLarge(points, grid.cap);
  if (points == 0) throw std::invalid_argument("grid_oracle: every axis needs at least one value");

  const ChannelRealization ch = realize(spec);
  DecisionVariables dv;
  dv.eta.resize(1);
  dv.tau.resize(1);
  dv.power.resize(1);
  dv.w1 = CMatrix::Ones(1, 1);
  dv.w2 = CMatrix::Ones(1, 1);
  dv.ris.mode = mode;
  dv.ris.beta_t.resize(1);
  dv.ris.beta_r.resize(1);
  dv.ris.theta_t.resize(1);
  dv.ris.theta_r.resize(1);
  const std::vector<double> passive_dummy{0.0};
  const auto& beta_r_axis = mode == RisMode::Passive ? passive_dummy : grid.beta_r;

  SearchResult best;
  int index = 0;
  for (double eta : grid.eta)
    for (double tau : grid.tau)
      for (double p : grid.power)
        for (double tt : grid.theta_t)
          for (double tr : grid.theta_r)
            for (double bt : grid.beta_t)
              for (double br : beta_r_axis) {
                dv.eta(0) = eta;
                dv.tau(0) = tau;
                dv.power(0) = p;
                dv.ris.theta_t(0) = tt;
                dv.ris.theta_r(0) = tr;
                dv.ris.beta_t(0) = bt;
                dv.ris.beta_r(0) = mode == RisMode::Passive ? 1.0 - bt : br;
                const RateReport rates = rate_report(ch, dv, cfg);
                dv.rate_target = objective(rates);
                const ConstraintReport rep = evaluate_constraints(ch, dv, cfg, rates);
                if (rep.all_satisfied()) {
                  ++best.feasible_count;
                  if (!best.feasible || dv.rate_target > best.objective) {
                    best.feasible = true;
                    best.objective = dv.rate_target;
                    best.sum_rate = sum_rates(rates);
                    best.best = dv;
                    best.best_index = index;
                  }
                }
                ++index;
              }
  return best;
}

}  // namespace starsr
