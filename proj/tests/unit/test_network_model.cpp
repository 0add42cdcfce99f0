// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starsr/network_model.hpp"

using namespace starsr;

namespace {

// Free-space reference evaluated by hand: (c / (4 pi f))^2.
double reference_pl0(double f) {
  const double lambda = 299792458.0 / f;
  return (lambda / (4.0 * std::numbers::pi)) * (lambda / (4.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("dbm_to_watts conversions") {
  CHECK(dbm_to_watts(-120.0) == doctest::Approx(1e-15).epsilon(1e-12));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("path loss at 28 GHz") {
  SystemConfig cfg;
  const double pl0 = reference_pl0(28e9);
  CHECK(pl0 == doctest::Approx(7.26e-7).epsilon(1e-3));
  CHECK(path_loss(1.0, cfg) == doctest::Approx(pl0).epsilon(1e-12));
  CHECK(path_loss(200.0, cfg) == doctest::Approx(pl0 / 8e6).epsilon(1e-12));
  cfg.path_loss_exponent = 0.0;
  CHECK(path_loss(17.0, cfg) == doctest::Approx(pl0).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss(0.0, cfg), std::domain_error);
  CHECK_THROWS_AS(path_loss(-1.0, cfg), std::domain_error);
}

TEST_CASE("default system configuration") {
  const SystemConfig cfg;
  CHECK(cfg.symbols_per_bd_symbol == 100);
  CHECK(cfg.rician_k == 10.0);
  CHECK(cfg.carrier_hz == 28e9);
  CHECK(cfg.path_loss_exponent == 3.0);
  CHECK(cfg.noise_power_watts.bs == doctest::Approx(1e-15));
  CHECK(cfg.noise_power_watts.asris == doctest::Approx(1e-15));
  CHECK(cfg.noise_power_watts.sue == doctest::Approx(1e-15));
  CHECK(cfg.d_bs_sbd_m == 200.0);
  CHECK(cfg.d_bs_sue_max_m == 100.0);
  CHECK(cfg.d_bs_asris_max_m == 300.0);
  CHECK(cfg.bs_antenna_gain == 16.0);
  CHECK(cfg.ris_element_gain == 8.0);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("validate rejects broken configurations") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SystemConfig{};
  cfg.energy_conversion_efficiency = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SystemConfig{};
  cfg.noise_power_watts.sue = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("system config JSON round trip and dBm noise") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 4;
  cfg.p_asris_watts = 6.0;
  cfg.active_gain_rule = ActiveGainRule::Squared;
  CHECK(system_config_from_json(to_json(cfg)) == cfg);

  const auto j = nlohmann::json::parse(R"({"noise_dbm": -90, "noise_sue_watts": 2e-12})");
  const SystemConfig n = system_config_from_json(j);
  CHECK(n.noise_power_watts.bs == doctest::Approx(1e-12));
  CHECK(n.noise_power_watts.asris == doctest::Approx(1e-12));
  CHECK(n.noise_power_watts.sue == doctest::Approx(2e-12));
}

TEST_CASE("placement respects the geometry") {
  SystemConfig cfg;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Placement p = place_nodes(cfg, seed);
    CHECK(distance(p.bs, p.asris) <= cfg.d_bs_asris_max_m + 1e-9);
    for (const auto& s : p.sbd) CHECK(distance(p.bs, s) == doctest::Approx(cfg.d_bs_sbd_m));
    for (const auto& u : p.sue_reflect) {
      CHECK(distance(p.bs, u) <= cfg.d_bs_sue_max_m + 1e-9);
      CHECK(u.x < p.asris.x);
    }
    for (const auto& u : p.sue_transmit) {
      CHECK(distance(p.bs, u) <= cfg.d_bs_sue_max_m + 1e-9);
      CHECK(u.x > p.asris.x);
    }
  }
  const Placement a = place_nodes(cfg, 11), b = place_nodes(cfg, 11);
  CHECK(distance(a.bs, a.sbd[1]) == distance(b.bs, b.sbd[1]));
  CHECK(a.sue_transmit[2].y == b.sue_transmit[2].y);
}

TEST_CASE("realizations are deterministic and correctly shaped") {
  SystemConfig cfg;
  const Placement p = place_nodes(cfg, 3);
  const ChannelRealization a = draw_realization(cfg, p, 77), b = draw_realization(cfg, p, 77),
                           c = draw_realization(cfg, p, 78);
  CHECK(a.h1 == b.h1);
  CHECK(a.g2t == b.g2t);
  CHECK(a.h2 == b.h2);
  CHECK(a.h1 != c.h1);
  CHECK(a.h1.rows() == 8);
  CHECK(a.h1.cols() == 3);
  CHECK(a.h2.rows() == 16);
  CHECK(a.h2.cols() == 8);
  CHECK(a.g2r.rows() == 3);
  CHECK(a.g2r.cols() == 16);
  CHECK(a.h1.allFinite());
}

TEST_CASE("steering vector has unit-modulus entries and broadside ones") {
  const CVector v = steering_vector(6, {0, 0}, {10, 3});
  for (int n = 0; n < 6; ++n) CHECK(std::abs(v(n)) == doctest::Approx(1.0));
  const CVector broadside = steering_vector(4, {0, 0}, {10, 0});
  for (int n = 0; n < 4; ++n) CHECK(std::abs(broadside(n) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("Monte-Carlo second moments match the link budget") {
  SystemConfig cfg;
  cfg.n_bs_antennas = 1;
  cfg.n_ris_elements = 1;
  cfg.n_pairs = 1;
  const Placement p = place_nodes(cfg, 5);
  const LinkPowers lp = link_powers(cfg, p);
  const LosComponents los = los_components(cfg, p);
  const int n = 100000;
  double h1 = 0.0, h2 = 0.0, g2t = 0.0;
  for (int k = 0; k < n; ++k) {
    const ChannelRealization ch = draw_realization(cfg, p, 1000 + static_cast<std::uint64_t>(k));
    h1 += std::norm(ch.h1(0, 0));
    h2 += std::norm(ch.h2(0, 0));
    g2t += std::norm(ch.g2t(0, 0));
  }
  CHECK(h1 / n == doctest::Approx(lp.bs_sbd[0]).epsilon(0.02));
  CHECK(h2 / n == doctest::Approx(lp.bs_asris).epsilon(0.02));
  CHECK(g2t / n == doctest::Approx(lp.asris_sue_transmit[0]).epsilon(0.02));
  // Rician: LoS carries K/(K+1) of the mean power.
  CHECK(std::norm(los.h2(0, 0)) / lp.bs_asris == doctest::Approx(10.0 / 11.0).epsilon(1e-12));
}

TEST_CASE("link budgets apply the node gains to the path loss") {
  SystemConfig cfg;
  const Placement p = place_nodes(cfg, 8);
  const LinkPowers lp = link_powers(cfg, p);
  CHECK(lp.bs_sbd[0] == doctest::Approx(path_loss(distance(p.bs, p.sbd[0]), cfg) * 16.0).epsilon(1e-12));
  CHECK(lp.bs_asris == doctest::Approx(path_loss(distance(p.bs, p.asris), cfg) * 16.0 * 8.0).epsilon(1e-12));
  CHECK(lp.asris_sue_transmit[1] ==
        doctest::Approx(path_loss(distance(p.asris, p.sue_transmit[1]), cfg) * 8.0).epsilon(1e-12));
}
