// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "starsr/train.hpp"

namespace starsr {

struct TrainSection {
  int desk_episodes = 2000;
  bool paper_scale = false;  // use the per-algorithm episode counts instead of desk_episodes
  int checkpoint_every = 0;

  friend bool operator==(const TrainSection&, const TrainSection&) = default;
};

struct SweepSection {
  std::string name = "sweep";
  /// One of: p_bs, p_asris, harvest_threshold, elements (M), antennas (N), users (I).
  std::string variable = "p_bs";
  std::vector<double> values{4, 8, 16, 32};
  bool paired_modes = false;  // emit active and passive series with shared seeds
  int channels = 100;         // channel draws averaged per point
  /// "random_search" or an algorithm name ("ppo", "td3", "a3c").
  std::string method = "random_search";
  int budget = 1000;          // random_search samples per channel

  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct OracleSection {
  int eta = 11, tau = 11, power = 11, phase = 8, beta = 6;
  std::uint64_t channel_seed = 1;
  double cap = 1e7;

  friend bool operator==(const OracleSection&, const OracleSection&) = default;
};

struct RunConfig {
  EnvConfig env{};
  drl::HyperSet hyper{};
  TrainSection train{};
  SweepSection sweep{};
  OracleSection oracle{};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::string output_dir = "out";

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  int episodes(drl::Algorithm algo) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const drl::HyperSet& h);
drl::HyperSet hyper_set_from_json(const nlohmann::json& j);
/// Throws std::runtime_error naming the path when the file cannot be read.
RunConfig load_run_config(const std::string& path);

/// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const RunConfig& cfg);

}  // namespace starsr
