// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace starsr {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299792458.0;

/// How constraint 11c bounds an active element's gain.
enum class ActiveGainRule {
  Linear,   // beta <= p_ASRIS / 2, consistent with the equal-split protocol
  Squared,  // beta^2 <= p_ASRIS / 2, the constraint as printed
};

struct NoisePowers {
  double bs = 1e-15;
  double asris = 1e-15;
  double sue = 1e-15;

  friend bool operator==(const NoisePowers&, const NoisePowers&) = default;
};

/// Physical configuration of the network. All quantities are SI.
struct SystemConfig {
  int n_bs_antennas = 8;
  int n_ris_elements = 16;
  int n_pairs = 3;
  int symbols_per_bd_symbol = 100;
  double bandwidth_hz = 1.0;
  NoisePowers noise_power_watts{};
  double p_bs_max_watts = 20.0;
  double p_asris_watts = 10.0;
  double energy_conversion_efficiency = 0.8;
  double harvest_threshold_joules = 1e-6;
  double carrier_hz = 28e9;
  double path_loss_exponent = 3.0;
  double rician_k = 10.0;
  double bs_antenna_gain = 16.0;
  double ris_element_gain = 8.0;
  double d_bs_sbd_m = 200.0;
  double d_bs_sue_max_m = 100.0;
  double d_bs_asris_max_m = 300.0;
  ActiveGainRule active_gain_rule = ActiveGainRule::Linear;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Reads a SystemConfig from a JSON object. Missing keys keep their defaults.
/// Noise fields accept watts (`noise_bs_watts`) or dBm (`noise_bs_dbm`).
SystemConfig system_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SystemConfig& cfg);
SystemConfig load_system_config(const std::filesystem::path& path);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Node positions in meters. The BS sits at the origin and the ASRIS on the
/// positive x-axis; its surface is the vertical line x = asris.x.
struct Placement {
  Point bs{};
  Point asris{};
  std::vector<Point> sbd;
  std::vector<Point> sue_reflect;
  std::vector<Point> sue_transmit;
};

/// Random placement: SBDs on the ring of radius d_bs_sbd_m on the far side
/// of the BS, reflect-SUEs in the BS disc on the BS side of the surface,
/// transmit-SUEs in the BS disc behind the surface.
Placement place_nodes(const SystemConfig& cfg, std::uint64_t seed);

/// One draw of every channel block.
///
/// h1, g1, h3 are N x I with one column per user; h2 is the M x N BS->ASRIS
/// matrix (the h_2^H of the signal model); g2r, g2t are I x M with one row per SUE.
struct ChannelRealization {
  CMatrix h1;
  CMatrix g1;
  CMatrix h2;
  CMatrix h3;
  CMatrix g2r;
  CMatrix g2t;
  std::uint64_t seed = 0;
};

/// Mean per-entry power of each link (path loss times antenna gains).
struct LinkPowers {
  std::vector<double> bs_sbd;
  std::vector<double> bs_sue_reflect;
  double bs_asris = 0.0;
  std::vector<double> asris_sue_reflect;
  std::vector<double> asris_sue_transmit;
};

double dbm_to_watts(double dbm);

/// Free-space reference loss (lambda / 4 pi)^2 scaled by d^-alpha.
/// Throws std::domain_error for d <= 0.
double path_loss(double d, const SystemConfig& cfg);

LinkPowers link_powers(const SystemConfig& cfg, const Placement& placement);

/// Half-wavelength ULA response along the y-axis for a path arriving from
/// `towards` as seen from `from`.
CVector steering_vector(int elements, Point from, Point towards);

/// Deterministic line-of-sight parts of the Rician blocks, already scaled by
/// sqrt(K/(K+1)) and the link power.
struct LosComponents {
  CMatrix h2;
  CMatrix g2r;
  CMatrix g2t;
};

LosComponents los_components(const SystemConfig& cfg, const Placement& placement);

ChannelRealization draw_realization(const SystemConfig& cfg, const Placement& placement,
                                    std::uint64_t seed);

}  // namespace starsr
