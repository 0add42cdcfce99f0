// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "starsr/run_config.hpp"

namespace starsr {

struct SweepRow {
  std::string mode;  // "active" or "passive"
  double value = 0.0;
  std::uint64_t seed = 0;
  double min_rate = 0.0;  // mean over channels; channels with no feasible point count as 0
  double sum_rate = 0.0;
  double feasible_fraction = 0.0;
  std::string status = "ok";
};

struct SweepSummaryRow {
  std::string mode;
  double value = 0.0;
  double min_rate_mean = 0.0, min_rate_std = 0.0;
  double sum_rate_mean = 0.0, sum_rate_std = 0.0;
  double feasible_fraction = 0.0;
  int failures = 0;
};

struct SweepRecord {
  std::string config_hash;
  std::vector<SweepRow> rows;  // ordered by mode, value, seed
  std::vector<SweepSummaryRow> summary;
  double wall_clock_seconds = 0.0;
};

/// Copy of `cfg` with the sweep variable set to `value`.
RunConfig apply_sweep_value(const RunConfig& cfg, const std::string& variable, double value);

/// Metric of one (grid point, seed) pair averaged over the configured channels.
SweepRow evaluate_point(const RunConfig& point_cfg, std::uint64_t seed);

/// Runs every grid point x seed (x mode when paired). Work items run on up to
/// `threads` threads (0 picks the hardware concurrency); output order and
/// values do not depend on the thread count. Failures are recorded per row.
SweepRecord run_sweep(const RunConfig& cfg, unsigned threads = 0);

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows);

/// Writes <name>_per_seed.csv, <name>.csv and <name>_run.json into `dir`.
void write_sweep(const SweepRecord& rec, const RunConfig& cfg, const std::string& dir);

}  // namespace starsr
