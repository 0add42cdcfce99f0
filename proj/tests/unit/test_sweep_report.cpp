// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "starsr/report.hpp"
#include "starsr/sweep.hpp"

using namespace starsr;
namespace fs = std::filesystem;

namespace {

RunConfig small_sweep() {
  RunConfig cfg;
  cfg.env.system.n_bs_antennas = 1;
  cfg.env.system.n_ris_elements = 2;
  cfg.env.system.n_pairs = 1;
  cfg.env.system.harvest_threshold_joules = 1e-15;
  cfg.sweep.name = "pbs";
  cfg.sweep.variable = "p_bs";
  cfg.sweep.values = {4, 8, 16, 32};
  cfg.sweep.channels = 3;
  cfg.sweep.budget = 50;
  cfg.seeds = {1, 2, 3};
  return cfg;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("starsr_unit_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("sweep variables") {
  const RunConfig cfg = small_sweep();
  CHECK(apply_sweep_value(cfg, "p_asris", 6.0).env.system.p_asris_watts == 6.0);
  CHECK(apply_sweep_value(cfg, "elements", 32).env.system.n_ris_elements == 32);
  CHECK(apply_sweep_value(cfg, "harvest_threshold", 2e-6).env.system.harvest_threshold_joules == 2e-6);
  CHECK_THROWS_AS(apply_sweep_value(cfg, "elements", 2.5), std::invalid_argument);
  CHECK_THROWS_AS(apply_sweep_value(cfg, "bandwidth", 1.0), std::invalid_argument);
}

TEST_CASE("four-point sweep writes one summary row per value") {
  const RunConfig cfg = small_sweep();
  const SweepRecord rec = run_sweep(cfg, 1);
  REQUIRE(rec.rows.size() == 12);
  REQUIRE(rec.summary.size() == 4);
  for (const auto& r : rec.rows) CHECK(r.status == "ok");
  const fs::path dir = fresh_dir("sweep");
  write_sweep(rec, cfg, dir.string());
  const auto summary = lines(dir / "pbs.csv");
  REQUIRE(summary.size() == 5);
  CHECK(summary[0] ==
        "config_hash,seeds,mode,variable,value,min_rate_mean,min_rate_std,sum_rate_mean,sum_rate_std,"
        "feasible_fraction,failures");
  CHECK(summary[1].rfind(config_hash(cfg) + ",1;2;3,active,p_bs,4,", 0) == 0);
  CHECK(lines(dir / "pbs_per_seed.csv").size() == 13);
  CHECK(fs::exists(dir / "pbs_run.json"));

  // Thread count does not change the output.
  const SweepRecord rec2 = run_sweep(cfg, 3);
  const fs::path dir2 = fresh_dir("sweep2");
  write_sweep(rec2, cfg, dir2.string());
  CHECK(slurp(dir / "pbs.csv") == slurp(dir2 / "pbs.csv"));
  CHECK(slurp(dir / "pbs_per_seed.csv") == slurp(dir2 / "pbs_per_seed.csv"));
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("summary statistics") {
  std::vector<SweepRow> rows(3);
  for (int k = 0; k < 3; ++k) {
    rows[k].mode = "active";
    rows[k].value = 4;
    rows[k].min_rate = k + 1.0;
    rows[k].sum_rate = 2.0 * (k + 1.0);
    rows[k].feasible_fraction = 1.0;
  }
  rows[2].status = "error: boom";
  const auto s = summarize(rows);
  REQUIRE(s.size() == 1);
  CHECK(s[0].min_rate_mean == 1.5);
  CHECK(s[0].min_rate_std == doctest::Approx(std::sqrt(0.5)));
  CHECK(s[0].failures == 1);
}

TEST_CASE("paired sweep shares seeds between modes") {
  RunConfig cfg = small_sweep();
  cfg.sweep.values = {4, 8};
  cfg.sweep.paired_modes = true;
  const SweepRecord rec = run_sweep(cfg, 1);
  REQUIRE(rec.summary.size() == 4);
  CHECK(rec.summary[0].mode == "active");
  CHECK(rec.summary[2].mode == "passive");
  for (std::size_t k = 0; k < 6; ++k) CHECK(rec.rows[k].seed == rec.rows[k + 6].seed);
}

TEST_CASE("failures are recorded and the sweep continues") {
  RunConfig cfg = small_sweep();
  cfg.sweep.variable = "elements";
  cfg.sweep.values = {2, 2.5};
  const SweepRecord rec = run_sweep(cfg, 1);
  REQUIRE(rec.summary.size() == 2);
  CHECK(rec.summary[0].failures == 0);
  CHECK(rec.summary[1].failures == 3);
  CHECK(rec.rows.back().status.rfind("error:", 0) == 0);
}

TEST_CASE("report aggregates summaries and checks monotonicity") {
  const fs::path dir = fresh_dir("report");
  fs::create_directories(dir);
  std::ofstream(dir / "fig.csv") << "config_hash,seeds,mode,variable,value,min_rate_mean,min_rate_std,sum_rate_mean,"
                                    "sum_rate_std,feasible_fraction,failures\n"
                                    "h,1,active,p_bs,8,2,0,6,0,1,0\n"
                                    "h,1,active,p_bs,4,1,0,3,0,1,0\n"
                                    "h,1,passive,p_bs,4,1,0,3,0,1,0\n"
                                    "h,1,passive,p_bs,8,0.5,0,2,0,1,0\n";
  std::ofstream(dir / "other.csv") << "a,b\n1,2\n";
  const Report rep = build_report(dir.string());
  CHECK(rep.rows.size() == 8);
  REQUIRE(rep.checks.size() == 2);
  CHECK(rep.checks[0].line() ==
        "monotone-check source=fig.csv mode=active variable=p_bs metric=min_rate_mean nondecreasing=yes steps=1 "
        "violations=0");
  CHECK_FALSE(rep.checks[1].nondecreasing);
  write_report(rep, (dir / "long.out").string());
  CHECK(lines(dir / "long.out").size() == 9);
  fs::remove_all(dir);
  CHECK_THROWS_AS(build_report(dir.string()), std::runtime_error);
}
