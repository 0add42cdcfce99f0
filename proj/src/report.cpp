// SPDX-License-Identifier: Apache-2.0
#include "starsr/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace starsr {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string MonotoneCheck::line() const {
  std::ostringstream os;
  os << "monotone-check source=" << source << " mode=" << mode << " variable=" << variable
     << " metric=min_rate_mean nondecreasing=" << (nondecreasing ? "yes" : "no") << " steps=" << steps
     << " violations=" << violations;
  return os.str();
}

Report build_report(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  Report rep;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::string header;
    if (!std::getline(in, header)) continue;
    const auto cols = split(header);
    auto idx = [&](const std::string& name) {
      const auto it = std::find(cols.begin(), cols.end(), name);
      return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
    };
    if (idx("min_rate_mean") < 0) continue;
    const std::string source = path.filename().string();
    const int i_hash = idx("config_hash"), i_mode = idx("mode"), i_var = idx("variable"), i_val = idx("value");
    const std::vector<std::string> metrics{"min_rate", "sum_rate"};

    // (mode) -> ordered (value, min_rate_mean) for the monotone check.
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    std::map<std::string, std::string> series_var;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split(line);
      if (cells.size() != cols.size()) throw std::runtime_error("malformed row in " + path.string());
      for (const auto& m : metrics) {
        LongRow r;
        r.source = source;
        r.config_hash = cells[static_cast<std::size_t>(i_hash)];
        r.mode = cells[static_cast<std::size_t>(i_mode)];
        r.variable = cells[static_cast<std::size_t>(i_var)];
        r.value = std::stod(cells[static_cast<std::size_t>(i_val)]);
        r.metric = m;
        r.mean = std::stod(cells[static_cast<std::size_t>(idx(m + "_mean"))]);
        r.std = std::stod(cells[static_cast<std::size_t>(idx(m + "_std"))]);
        if (m == "min_rate") {
          series[r.mode].emplace_back(r.value, r.mean);
          series_var[r.mode] = r.variable;
        }
        rep.rows.push_back(r);
      }
    }
    for (auto& [mode, pts] : series) {
      std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      MonotoneCheck c{source, mode, series_var[mode]};
      for (std::size_t k = 1; k < pts.size(); ++k) {
        ++c.steps;
        if (!(pts[k].second >= pts[k - 1].second)) ++c.violations;
      }
      c.nondecreasing = c.violations == 0;
      rep.checks.push_back(c);
    }
  }
  if (rep.checks.empty()) throw std::runtime_error("no sweep summary CSVs found in " + dir);
  return rep;
}

void write_report(const Report& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17) << "source,config_hash,mode,variable,value,metric,mean,std\n";
  for (const auto& row : r.rows) {
    out << row.source << ',' << row.config_hash << ',' << row.mode << ',' << row.variable << ',' << row.value << ','
        << row.metric << ',' << row.mean << ',' << row.std << '\n';
  }
}

}  // namespace starsr
