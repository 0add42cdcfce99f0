// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace starsr {

struct LongRow {
  std::string source, config_hash, mode, variable;
  double value = 0.0;
  std::string metric;
  double mean = 0.0, std = 0.0;
};

struct MonotoneCheck {
  std::string source, mode, variable;
  bool nondecreasing = true;
  int steps = 0;
  int violations = 0;

  std::string line() const;
};

struct Report {
  std::vector<LongRow> rows;
  std::vector<MonotoneCheck> checks;
};

/// Reads every sweep summary CSV in `dir` (files whose header contains min_rate_mean).
/// Throws std::runtime_error when the directory is missing or has no summaries.
Report build_report(const std::string& dir);

/// Columns: source, config_hash, mode, variable, value, metric, mean, std.
void write_report(const Report& r, const std::string& path);

}  // namespace starsr
