// SPDX-License-Identifier: Apache-2.0
// Command-line entry point: train, sweep, oracle, baseline, report.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "starsr/baselines.hpp"
#include "starsr/report.hpp"
#include "starsr/sweep.hpp"

namespace fs = std::filesystem;
using namespace starsr;

namespace {

constexpr const char* kVersion = "starsr 0.1.0";

RunConfig config_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  if (!fs::exists(path)) throw std::runtime_error("config file not found: " + path);
  return load_run_config(path);
}

int cmd_train(const std::string& algo_name, const std::string& config_path, std::uint64_t seed,
              const std::string& out_dir, bool paper_scale, int episodes_override) {
  RunConfig cfg = config_or_default(config_path);
  if (paper_scale) cfg.train.paper_scale = true;
  const drl::Algorithm algo = drl::parse_algorithm(algo_name);
  drl::TrainOptions opt;
  opt.episodes = episodes_override >= 0 ? episodes_override : cfg.episodes(algo);
  opt.seed = seed;
  opt.checkpoint_every = cfg.train.checkpoint_every;
  opt.checkpoint_dir = (fs::path(out_dir) / "checkpoints").string();
  fs::create_directories(out_dir);
  const std::string stem = algo_name + "_seed" + std::to_string(seed);
  const std::string hash = config_hash(cfg);

  auto write_trace = [&](const drl::TrainingTrace& trace) {
    std::ofstream csv(fs::path(out_dir) / ("trace_" + stem + ".csv"));
    drl::write_trace_csv(csv, trace, hash, seed);
  };
  try {
    const drl::TrainResult res = drl::train(algo, cfg.env, cfg.hyper, opt);
    write_trace(res.trace);
    res.agent->checkpoint().save_file((fs::path(out_dir) / ("checkpoint_" + stem + ".ckpt")).string());
    std::cout << "trained " << algo_name << " for " << res.trace.episodes.size() << " episodes; tail-100 mean reward "
              << std::setprecision(6) << res.trace.tail_mean_reward(100) << "\n";
  } catch (const drl::TrainingAborted& e) {
    write_trace(e.trace());
    e.last_good().save_file((fs::path(out_dir) / ("checkpoint_" + stem + ".last_good.ckpt")).string());
    throw;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool paper_scale, unsigned threads) {
  RunConfig cfg = config_or_default(config_path);
  if (paper_scale) cfg.train.paper_scale = true;
  const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
  const SweepRecord rec = run_sweep(cfg, threads);
  write_sweep(rec, cfg, dir);
  int failures = 0;
  for (const auto& s : rec.summary) failures += s.failures;
  std::cout << "sweep " << cfg.sweep.name << ": " << rec.rows.size() << " runs, " << failures << " failed; wrote "
            << (fs::path(dir) / (cfg.sweep.name + ".csv")).string() << "\n";
  return 0;
}

int cmd_oracle(const std::string& config_path) {
  const RunConfig cfg = config_or_default(config_path);
  const auto& o = cfg.oracle;
  GridSpec grid = GridSpec::uniform(cfg.env.system, cfg.env.ris_mode, o.eta, o.tau, o.power, o.phase, o.beta);
  grid.cap = o.cap;
  const SearchResult r = grid_oracle({cfg.env, o.channel_seed}, grid);
  std::cout << std::setprecision(17);
  if (!r.feasible) {
    std::cout << "oracle: infeasible (" << grid.size(cfg.env.ris_mode) << " points evaluated)\n";
    return 0;
  }
  std::cout << "oracle: min_rate=" << r.objective << " sum_rate=" << r.sum_rate << " eta=" << r.best.eta(0)
            << " tau=" << r.best.tau(0) << " power=" << r.best.power(0) << " feasible_points=" << r.feasible_count
            << "\n";
  return 0;
}

int cmd_baseline(const std::string& config_path, int budget, std::uint64_t seed, std::uint64_t channel) {
  const RunConfig cfg = config_or_default(config_path);
  const SearchResult r = random_search({cfg.env, channel}, budget, seed);
  std::cout << std::setprecision(17);
  if (!r.feasible) {
    std::cout << "random_search: no feasible sample in " << budget << " draws\n";
    return 0;
  }
  std::cout << "random_search: min_rate=" << r.objective << " sum_rate=" << r.sum_rate << " best_index="
            << r.best_index << " feasible=" << r.feasible_count << "/" << budget << "\n";
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_path) {
  const Report rep = build_report(in_dir);
  const std::string path = out_path.empty() ? (fs::path(in_dir) / "report.csv").string() : out_path;
  write_report(rep, path);
  for (const auto& c : rep.checks) std::cout << c.line() << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource allocation for a STAR-RIS assisted symbiotic-radio network with deep RL"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool paper_scale = false;
  app.add_flag("--paper-scale", paper_scale, "Use the full per-algorithm episode counts");

  std::string algo, config, out, in;
  std::uint64_t seed = 1, channel = 1;
  int budget = 1000, episodes = -1;
  unsigned threads = 0;

  auto* train = app.add_subcommand("train", "Train one agent and write its trace and checkpoint");
  train->add_option("--algo", algo, "ppo, td3 or a3c")->required()->check(CLI::IsMember({"ppo", "td3", "a3c"}));
  train->add_option("--config", config, "Run config (JSON)");
  train->add_option("--seed", seed, "Seed");
  train->add_option("--out", out, "Output directory")->required();
  train->add_option("--episodes", episodes, "Override the episode count");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--config", config, "Run config (JSON)")->required();
  sweep->add_option("--out", out, "Output directory (defaults to output_dir in the config)");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* oracle = app.add_subcommand("oracle", "Brute-force grid optimum for an N=M=I=1 instance");
  oracle->add_option("--config", config, "Run config (JSON)")->required();

  auto* baseline = app.add_subcommand("baseline", "Random-search baseline on one channel");
  baseline->add_option("--budget", budget, "Number of samples")->required()->check(CLI::PositiveNumber);
  baseline->add_option("--config", config, "Run config (JSON)");
  baseline->add_option("--seed", seed, "Sampling seed");
  baseline->add_option("--channel", channel, "Channel seed");

  auto* report = app.add_subcommand("report", "Aggregate sweep CSVs into a long-format table");
  report->add_option("--in", in, "Directory holding sweep CSVs")->required();
  report->add_option("--out", out, "Output CSV (defaults to <in>/report.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*train) return cmd_train(algo, config, seed, out, paper_scale, episodes);
    if (*sweep) return cmd_sweep(config, out, paper_scale, threads);
    if (*oracle) return cmd_oracle(config);
    if (*baseline) return cmd_baseline(config, budget, seed, channel);
    if (*report) return cmd_report(in, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
