// SPDX-License-Identifier: Apache-2.0
#include "starsr/network_model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "starsr/random.hpp"

namespace starsr {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid SystemConfig: ") + what);
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

double read_noise(const nlohmann::json& j, const std::string& stem, double fallback) {
  if (auto it = j.find(stem + "_watts"); it != j.end()) return it->get<double>();
  if (auto it = j.find(stem + "_dbm"); it != j.end()) return dbm_to_watts(it->get<double>());
  return fallback;
}

Point sample_in_disc(Philox& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {r * std::cos(phi), r * std::sin(phi)};
}

template <typename Accept>
Point sample_region(Philox& rng, double radius, Accept accept) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Point p = sample_in_disc(rng, radius);
    if (accept(p)) return p;
  }
  throw std::runtime_error("placement region is empty for this SystemConfig");
}

constexpr double kMinSeparation = 1.0;

}  // namespace

void SystemConfig::validate() const {
  require(n_bs_antennas >= 1, "n_bs_antennas >= 1");
  require(n_ris_elements >= 1, "n_ris_elements >= 1");
  require(n_pairs >= 1, "n_pairs >= 1");
  require(symbols_per_bd_symbol >= 1, "symbols_per_bd_symbol >= 1");
  require(bandwidth_hz > 0.0, "bandwidth_hz > 0");
  require(noise_power_watts.bs > 0.0 && noise_power_watts.asris > 0.0 && noise_power_watts.sue > 0.0,
          "noise powers > 0");
  require(p_bs_max_watts > 0.0, "p_bs_max_watts > 0");
  require(p_asris_watts > 0.0, "p_asris_watts > 0");
  require(energy_conversion_efficiency >= 0.0 && energy_conversion_efficiency <= 1.0,
          "0 <= energy_conversion_efficiency <= 1");
  require(harvest_threshold_joules >= 0.0, "harvest_threshold_joules >= 0");
  require(carrier_hz > 0.0, "carrier_hz > 0");
  require(path_loss_exponent >= 0.0, "path_loss_exponent >= 0");
  require(rician_k >= 0.0, "rician_k >= 0");
  require(bs_antenna_gain > 0.0 && ris_element_gain > 0.0, "antenna gains > 0");
  require(d_bs_sbd_m > 0.0, "d_bs_sbd_m > 0");
  require(d_bs_sue_max_m > 4.0 * kMinSeparation, "d_bs_sue_max_m > 4 m");
  require(d_bs_asris_max_m > 2.0 * kMinSeparation, "d_bs_asris_max_m > 2 m");
}

SystemConfig system_config_from_json(const nlohmann::json& j) {
  SystemConfig cfg;
  read_if(j, "n_bs_antennas", cfg.n_bs_antennas);
  read_if(j, "n_ris_elements", cfg.n_ris_elements);
  read_if(j, "n_pairs", cfg.n_pairs);
  read_if(j, "symbols_per_bd_symbol", cfg.symbols_per_bd_symbol);
  read_if(j, "bandwidth_hz", cfg.bandwidth_hz);
  if (auto it = j.find("noise_dbm"); it != j.end()) {
    const double w = dbm_to_watts(it->get<double>());
    cfg.noise_power_watts = {w, w, w};
  }
  cfg.noise_power_watts.bs = read_noise(j, "noise_bs", cfg.noise_power_watts.bs);
  cfg.noise_power_watts.asris = read_noise(j, "noise_asris", cfg.noise_power_watts.asris);
  cfg.noise_power_watts.sue = read_noise(j, "noise_sue", cfg.noise_power_watts.sue);
  read_if(j, "p_bs_max_watts", cfg.p_bs_max_watts);
  read_if(j, "p_asris_watts", cfg.p_asris_watts);
  read_if(j, "energy_conversion_efficiency", cfg.energy_conversion_efficiency);
  read_if(j, "harvest_threshold_joules", cfg.harvest_threshold_joules);
  read_if(j, "carrier_hz", cfg.carrier_hz);
  read_if(j, "path_loss_exponent", cfg.path_loss_exponent);
  read_if(j, "rician_k", cfg.rician_k);
  read_if(j, "bs_antenna_gain", cfg.bs_antenna_gain);
  read_if(j, "ris_element_gain", cfg.ris_element_gain);
  read_if(j, "d_bs_sbd_m", cfg.d_bs_sbd_m);
  read_if(j, "d_bs_sue_max_m", cfg.d_bs_sue_max_m);
  read_if(j, "d_bs_asris_max_m", cfg.d_bs_asris_max_m);
  if (auto it = j.find("active_gain_rule"); it != j.end()) {
    const auto rule = it->get<std::string>();
    if (rule == "linear") {
      cfg.active_gain_rule = ActiveGainRule::Linear;
    } else if (rule == "squared") {
      cfg.active_gain_rule = ActiveGainRule::Squared;
    } else {
      throw std::invalid_argument("active_gain_rule must be 'linear' or 'squared', got '" + rule + "'");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const SystemConfig& cfg) {
  return {
      {"n_bs_antennas", cfg.n_bs_antennas},
      {"n_ris_elements", cfg.n_ris_elements},
      {"n_pairs", cfg.n_pairs},
      {"symbols_per_bd_symbol", cfg.symbols_per_bd_symbol},
      {"bandwidth_hz", cfg.bandwidth_hz},
      {"noise_bs_watts", cfg.noise_power_watts.bs},
      {"noise_asris_watts", cfg.noise_power_watts.asris},
      {"noise_sue_watts", cfg.noise_power_watts.sue},
      {"p_bs_max_watts", cfg.p_bs_max_watts},
      {"p_asris_watts", cfg.p_asris_watts},
      {"energy_conversion_efficiency", cfg.energy_conversion_efficiency},
      {"harvest_threshold_joules", cfg.harvest_threshold_joules},
      {"carrier_hz", cfg.carrier_hz},
      {"path_loss_exponent", cfg.path_loss_exponent},
      {"rician_k", cfg.rician_k},
      {"bs_antenna_gain", cfg.bs_antenna_gain},
      {"ris_element_gain", cfg.ris_element_gain},
      {"d_bs_sbd_m", cfg.d_bs_sbd_m},
      {"d_bs_sue_max_m", cfg.d_bs_sue_max_m},
      {"d_bs_asris_max_m", cfg.d_bs_asris_max_m},
      {"active_gain_rule", cfg.active_gain_rule == ActiveGainRule::Linear ? "linear" : "squared"},
  };
}

SystemConfig load_system_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  const auto j = nlohmann::json::parse(in);
  return system_config_from_json(j.contains("system") ? j.at("system") : j);
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_loss(double d, const SystemConfig& cfg) {
  if (!(d > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  const double wavelength = kSpeedOfLight / cfg.carrier_hz;
  const double ref = wavelength / (4.0 * std::numbers::pi);
  return ref * ref * std::pow(d, -cfg.path_loss_exponent);
}

Placement place_nodes(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Philox rng(seed, 0x706c616365ULL);
  Placement p;
  const double asris_reach = std::min(cfg.d_bs_asris_max_m, cfg.d_bs_sue_max_m / 2.0);
  p.asris = {asris_reach * rng.uniform(0.5, 1.0), 0.0};
  p.asris.x = std::max(p.asris.x, 2.0 * kMinSeparation);

  const auto far_enough = [&](Point q) {
    return distance(q, p.bs) >= kMinSeparation && distance(q, p.asris) >= kMinSeparation;
  };
  for (int i = 0; i < cfg.n_pairs; ++i) {
    const double phi = rng.uniform(0.5 * std::numbers::pi, 1.5 * std::numbers::pi);
    p.sbd.push_back({cfg.d_bs_sbd_m * std::cos(phi), cfg.d_bs_sbd_m * std::sin(phi)});
  }
  for (int i = 0; i < cfg.n_pairs; ++i) {
    p.sue_reflect.push_back(sample_region(
        rng, cfg.d_bs_sue_max_m, [&](Point q) { return q.x < p.asris.x - kMinSeparation && far_enough(q); }));
  }
  for (int i = 0; i < cfg.n_pairs; ++i) {
    p.sue_transmit.push_back(sample_region(
        rng, cfg.d_bs_sue_max_m, [&](Point q) { return q.x > p.asris.x + kMinSeparation && far_enough(q); }));
  }
  return p;
}

LinkPowers link_powers(const SystemConfig& cfg, const Placement& placement) {
  const double g_bs = cfg.bs_antenna_gain;
  const double g_ris = cfg.ris_element_gain;
  LinkPowers lp;
  for (const auto& q : placement.sbd) lp.bs_sbd.push_back(path_loss(distance(placement.bs, q), cfg) * g_bs);
  for (const auto& q : placement.sue_reflect) {
    lp.bs_sue_reflect.push_back(path_loss(distance(placement.bs, q), cfg) * g_bs);
    lp.asris_sue_reflect.push_back(path_loss(distance(placement.asris, q), cfg) * g_ris);
  }
  for (const auto& q : placement.sue_transmit) {
    lp.asris_sue_transmit.push_back(path_loss(distance(placement.asris, q), cfg) * g_ris);
  }
  lp.bs_asris = path_loss(distance(placement.bs, placement.asris), cfg) * g_bs * g_ris;
  return lp;
}

CVector steering_vector(int elements, Point from, Point towards) {
  const double d = distance(from, towards);
  const double sin_angle = d > 0.0 ? (towards.y - from.y) / d : 0.0;
  CVector a(elements);
  for (int n = 0; n < elements; ++n) {
    a(n) = std::polar(1.0, std::numbers::pi * n * sin_angle);
  }
  return a;
}

LosComponents los_components(const SystemConfig& cfg, const Placement& placement) {
  const int N = cfg.n_bs_antennas;
  const int M = cfg.n_ris_elements;
  const int I = cfg.n_pairs;
  const double los_weight = std::sqrt(cfg.rician_k / (cfg.rician_k + 1.0));
  const LinkPowers lp = link_powers(cfg, placement);

  LosComponents los;
  const CVector at_ris = steering_vector(M, placement.asris, placement.bs);
  const CVector at_bs = steering_vector(N, placement.bs, placement.asris);
  los.h2 = (los_weight * std::sqrt(lp.bs_asris)) * (at_ris * at_bs.adjoint());
  los.g2r.resize(I, M);
  los.g2t.resize(I, M);
  for (int i = 0; i < I; ++i) {
    los.g2r.row(i) = (los_weight * std::sqrt(lp.asris_sue_reflect[i])) *
                     steering_vector(M, placement.asris, placement.sue_reflect[i]).transpose();
    los.g2t.row(i) = (los_weight * std::sqrt(lp.asris_sue_transmit[i])) *
                     steering_vector(M, placement.asris, placement.sue_transmit[i]).transpose();
  }
  return los;
}

ChannelRealization draw_realization(const SystemConfig& cfg, const Placement& placement,
                                    std::uint64_t seed) {
  const int N = cfg.n_bs_antennas;
  const int M = cfg.n_ris_elements;
  const int I = cfg.n_pairs;
  const LinkPowers lp = link_powers(cfg, placement);
  Philox rng(seed, 0x6368616eULL);

  ChannelRealization ch;
  ch.seed = seed;
  const auto rayleigh = [&](CMatrix& out, const std::vector<double>& power) {
    out.resize(N, I);
    for (int i = 0; i < I; ++i) {
      const double amp = std::sqrt(power[i]);
      for (int n = 0; n < N; ++n) out(n, i) = amp * rng.complex_normal();
    }
  };
  rayleigh(ch.h1, lp.bs_sbd);
  rayleigh(ch.g1, lp.bs_sbd);
  rayleigh(ch.h3, lp.bs_sue_reflect);

  const LosComponents los = los_components(cfg, placement);
  const double nlos_weight = std::sqrt(1.0 / (cfg.rician_k + 1.0));
  ch.h2 = los.h2;
  const double h2_amp = nlos_weight * std::sqrt(lp.bs_asris);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) ch.h2(m, n) += h2_amp * rng.complex_normal();
  }
  const auto rician_rows = [&](CMatrix& out, const CMatrix& los_part, const std::vector<double>& power) {
    out = los_part;
    for (int i = 0; i < I; ++i) {
      const double amp = nlos_weight * std::sqrt(power[i]);
      for (int m = 0; m < M; ++m) out(i, m) += amp * rng.complex_normal();
    }
  };
  rician_rows(ch.g2r, los.g2r, lp.asris_sue_reflect);
  rician_rows(ch.g2t, los.g2t, lp.asris_sue_transmit);
  return ch;
}

}  // namespace starsr
