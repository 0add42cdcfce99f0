// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starsr/baselines.hpp"

using namespace starsr;
using doctest::Approx;
using Eigen::VectorXd;

namespace {

EnvSpec scalar_spec(RisMode mode, std::uint64_t channel_seed = 3) {
  EnvSpec spec;
  spec.env.system.n_bs_antennas = 1;
  spec.env.system.n_ris_elements = 1;
  spec.env.system.n_pairs = 1;
  spec.env.system.harvest_threshold_joules = 1e-15;
  spec.env.ris_mode = mode;
  spec.channel_seed = channel_seed;
  return spec;
}

GridSpec point_grid(double eta, double power, double beta) {
  GridSpec g;
  g.eta = {eta};
  g.tau = {0.5};
  g.power = {power};
  g.theta_t = {0.0};
  g.theta_r = {0.0};
  g.beta_t = {beta};
  g.beta_r = {beta};
  return g;
}

}  // namespace

TEST_CASE("realize matches environment reset") {
  EnvSpec spec = scalar_spec(RisMode::Active);
  spec.env.system.n_bs_antennas = 2;
  Environment env(spec.env);
  const VectorXd s = env.reset(spec.channel_seed);
  CHECK(flatten_state(realize(spec)) == s);
}

TEST_CASE("random search contracts") {
  EnvSpec spec = scalar_spec(RisMode::Active);
  CHECK_THROWS_AS(random_search(spec, 0, 1), std::invalid_argument);

  const SearchResult one = random_search(spec, 1, 5);
  CHECK(one.feasible_count <= 1);
  CHECK(one.best_index == (one.feasible ? 0 : -1));

  double prev = -1.0;
  for (int budget : {10, 100, 1000, 3000}) {
    const SearchResult r = random_search(spec, budget, 5);
    REQUIRE(r.feasible);
    CHECK(r.objective >= prev);
    prev = r.objective;
    const RateReport rates = rate_report(realize(spec), r.best, spec.env.system);
    CHECK(objective(rates) == r.objective);
    CHECK(r.sum_rate >= 3.0 * r.objective - 1e-12);
  }
  CHECK(random_search(spec, 500, 5).objective == random_search(spec, 500, 5).objective);

  spec.env.system.harvest_threshold_joules = 1.0;
  const SearchResult none = random_search(spec, 200, 5);
  CHECK_FALSE(none.feasible);
  CHECK(none.objective == 0.0);
  CHECK(none.feasible_count == 0);
}

TEST_CASE("grid oracle guards") {
  EnvSpec spec = scalar_spec(RisMode::Active);
  GridSpec g = GridSpec::uniform(spec.env.system, RisMode::Active, 11, 11, 11, 8, 6);
  CHECK(g.size(RisMode::Active) == Approx(11.0 * 11 * 11 * 8 * 8 * 6 * 6));
  CHECK(g.size(RisMode::Passive) == Approx(11.0 * 11 * 11 * 8 * 8 * 6));
  g.cap = 1e5;
  try {
    grid_oracle(spec, g);
    FAIL("expected GridTooLarge");
  } catch (const GridTooLarge& e) {
    CHECK(e.points() == Approx(g.size(RisMode::Active)));
  }
  EnvSpec big = spec;
  big.env.system.n_pairs = 2;
  CHECK_THROWS_AS(grid_oracle(big, point_grid(0.5, 1.0, 1.0)), std::invalid_argument);
  CHECK(linspace(0.0, 1.0, 5)[1] == 0.25);
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("grid oracle tau sweep finds the analytic crossing") {
  EnvSpec spec = scalar_spec(RisMode::Active);
  spec.env.system.harvest_threshold_joules = 0.0;  // keeps tau -> 1 feasible
  const SystemConfig& cfg = spec.env.system;
  const ChannelRealization ch = realize(spec);
  // Per-unit-time capacities of phase 1 and phase 2 at fixed eta, power, beta.
  GridSpec g = point_grid(0.9, 10.0, 2.0);
  DecisionVariables dv;
  dv.eta = VectorXd::Constant(1, 0.9);
  dv.power = VectorXd::Constant(1, 10.0);
  dv.w1 = dv.w2 = CMatrix::Ones(1, 1);
  dv.ris.mode = RisMode::Active;
  dv.ris.beta_t = dv.ris.beta_r = VectorXd::Constant(1, 2.0);
  dv.ris.theta_t = dv.ris.theta_r = VectorXd::Zero(1);
  dv.tau = VectorXd::Ones(1);
  const double c1 = rate_report(ch, dv, cfg).r1(0);
  dv.tau = VectorXd::Zero(1);
  const RateReport r0 = rate_report(ch, dv, cfg);
  const double c2 = std::min(r0.r2r(0), r0.r2t(0));
  const double tau_star = c2 / (c1 + c2);
  const double best = c1 * c2 / (c1 + c2);

  g.tau = linspace(0.0, 1.0, 20001);
  const SearchResult r = grid_oracle(spec, g);
  REQUIRE(r.feasible);
  CHECK(r.best.tau(0) == Approx(tau_star).epsilon(1e-4).scale(1.0));
  CHECK(r.objective <= best * (1 + 1e-12));
  CHECK(r.objective >= best - std::max(c1, c2) * 1e-4);
}

TEST_CASE("grid refinement never lowers the optimum") {
  const EnvSpec spec = scalar_spec(RisMode::Active);
  double prev = -1.0;
  for (int n : {3, 5, 9}) {
    const GridSpec g = GridSpec::uniform(spec.env.system, RisMode::Active, n, n, n, n - 1, n);
    const SearchResult r = grid_oracle(spec, g);
    CHECK(r.objective >= prev);
    prev = r.objective;
  }
  CHECK(prev > 0.0);
}

TEST_CASE("grid oracle passive mode ties the split") {
  const EnvSpec spec = scalar_spec(RisMode::Passive);
  const SearchResult r = grid_oracle(spec, GridSpec::uniform(spec.env.system, RisMode::Passive, 6, 6, 6, 4, 6));
  REQUIRE(r.feasible);
  CHECK(r.best.ris.beta_t(0) + r.best.ris.beta_r(0) == Approx(1.0));
}

TEST_CASE("grid oracle reports infeasible configurations") {
  EnvSpec spec = scalar_spec(RisMode::Active);
  spec.env.system.harvest_threshold_joules = 1e3;
  const SearchResult r = grid_oracle(spec, GridSpec::uniform(spec.env.system, RisMode::Active, 4, 4, 4, 2, 3));
  CHECK_FALSE(r.feasible);
  CHECK(r.feasible_count == 0);
  CHECK(r.objective == 0.0);
}

TEST_CASE("random search lands within ten percent of the grid optimum") {
  const EnvSpec spec = scalar_spec(RisMode::Active);
  GridSpec g = GridSpec::uniform(spec.env.system, RisMode::Active, 11, 41, 11, 1, 6);
  g.theta_r = linspace(0.0, 2.0 * std::numbers::pi * 15.0 / 16.0, 16);
  const SearchResult oracle = grid_oracle(spec, g);
  const SearchResult rs = random_search(spec, 100000, 7);
  REQUIRE(oracle.feasible);
  REQUIRE(rs.feasible);
  MESSAGE("oracle ", oracle.objective, " random search ", rs.objective);
  CHECK(rs.objective >= 0.9 * oracle.objective);
  CHECK(rs.objective <= 1.1 * oracle.objective);
}
