// SPDX-License-Identifier: Apache-2.0
#include "starsr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <thread>

#include "starsr/baselines.hpp"

namespace starsr {

namespace {

std::string mode_name(RisMode m) { return m == RisMode::Active ? "active" : "passive"; }

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::uint64_t channel_seed(std::uint64_t seed, int c) {
  return mix_seed({seed, 0x6368616eULL, static_cast<std::uint64_t>(c)});
}

double sum_rates(const RateReport& r) { return r.r1.sum() + r.r2r.sum() + r.r2t.sum(); }

}  // namespace

RunConfig apply_sweep_value(const RunConfig& cfg, const std::string& variable, double value) {
  RunConfig out = cfg;
  SystemConfig& s = out.env.system;
  auto as_count = [&](const char* what) {
    const double r = std::round(value);
    if (r < 1.0 || std::abs(r - value) > 1e-9) throw std::invalid_argument(std::string(what) + " must be a positive integer");
    return static_cast<int>(r);
  };
  if (variable == "p_bs") s.p_bs_max_watts = value;
  else if (variable == "p_asris") s.p_asris_watts = value;
  else if (variable == "harvest_threshold") s.harvest_threshold_joules = value;
  else if (variable == "elements") s.n_ris_elements = as_count("elements");
  else if (variable == "antennas") s.n_bs_antennas = as_count("antennas");
  else if (variable == "users") s.n_pairs = as_count("users");
  else throw std::invalid_argument("unknown sweep variable '" + variable + "'");
  s.validate();
  return out;
}

SweepRow evaluate_point(const RunConfig& cfg, std::uint64_t seed) {
  SweepRow row;
  row.seed = seed;
  row.mode = mode_name(cfg.env.ris_mode);
  const int channels = cfg.sweep.channels;

  if (cfg.sweep.method == "random_search") {
    for (int c = 0; c < channels; ++c) {
      const SearchResult r =
          random_search({cfg.env, channel_seed(seed, c)}, cfg.sweep.budget, mix_seed({seed, 0x727363ULL, static_cast<std::uint64_t>(c)}));
      if (r.feasible) {
        row.min_rate += r.objective;
        row.sum_rate += r.sum_rate;
        row.feasible_fraction += 1.0;
      }
    }
  } else {
    const drl::Algorithm algo = drl::parse_algorithm(cfg.sweep.method);
    drl::TrainOptions opt;
    opt.episodes = cfg.episodes(algo);
    opt.seed = seed;
    const drl::TrainResult trained = drl::train(algo, cfg.env, cfg.hyper, opt);
    EnvConfig eval_env = cfg.env;
    eval_env.rate_mode = RateMode::DerivedR;
    for (int c = 0; c < channels; ++c) {
      const ChannelRealization ch = realize({cfg.env, channel_seed(seed, c)});
      const StepInfo info = evaluate_action(trained.agent->act(flatten_state(ch)), ch, eval_env);
      if (info.constraints.all_satisfied()) {
        row.min_rate += info.objective;
        row.sum_rate += sum_rates(info.rates);
        row.feasible_fraction += 1.0;
      }
    }
  }
  row.min_rate /= channels;
  row.sum_rate /= channels;
  row.feasible_fraction /= channels;
  return row;
}

std::vector<SweepSummaryRow> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SweepSummaryRow> out;
  std::map<std::pair<std::string, double>, std::vector<const SweepRow*>> groups;
  std::vector<std::pair<std::string, double>> order;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.mode, r.value);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : order) {
    SweepSummaryRow s;
    s.mode = key.first;
    s.value = key.second;
    std::vector<double> mins, sums, feas;
    for (const SweepRow* r : groups[key]) {
      if (r->status != "ok") {
        ++s.failures;
        continue;
      }
      mins.push_back(r->min_rate);
      sums.push_back(r->sum_rate);
      feas.push_back(r->feasible_fraction);
    }
    auto mean = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      return v.empty() ? std::nan("") : m / static_cast<double>(v.size());
    };
    auto stddev = [&](const std::vector<double>& v) {
      if (v.size() < 2) return v.empty() ? std::nan("") : 0.0;
      const double m = mean(v);
      double acc = 0.0;
      for (double x : v) acc += (x - m) * (x - m);
      return std::sqrt(acc / static_cast<double>(v.size() - 1));
    };
    s.min_rate_mean = mean(mins);
    s.min_rate_std = stddev(mins);
    s.sum_rate_mean = mean(sums);
    s.sum_rate_std = stddev(sums);
    s.feasible_fraction = mean(feas);
    out.push_back(s);
  }
  return out;
}

SweepRecord run_sweep(const RunConfig& cfg, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<RisMode> modes{cfg.env.ris_mode};
  if (cfg.sweep.paired_modes) modes = {RisMode::Active, RisMode::Passive};

  struct Task {
    RisMode mode;
    double value;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (RisMode m : modes)
    for (double v : cfg.sweep.values)
      for (std::uint64_t s : cfg.seeds) tasks.push_back({m, v, s});

  SweepRecord rec;
  rec.config_hash = config_hash(cfg);
  rec.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& t = tasks[k];
      SweepRow row;
      try {
        RunConfig point = apply_sweep_value(cfg, cfg.sweep.variable, t.value);
        point.env.ris_mode = t.mode;
        row = evaluate_point(point, t.seed);
      } catch (const std::exception& e) {
        row.status = sanitize(std::string("error: ") + e.what());
      }
      row.mode = mode_name(t.mode);
      row.value = t.value;
      row.seed = t.seed;
      rec.rows[k] = row;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  rec.summary = summarize(rec.rows);
  rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

void write_sweep(const SweepRecord& rec, const RunConfig& cfg, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string& var = cfg.sweep.variable;
  std::string seeds;
  for (std::size_t k = 0; k < cfg.seeds.size(); ++k) seeds += (k ? ";" : "") + std::to_string(cfg.seeds[k]);

  std::ofstream per(fs::path(dir) / (cfg.sweep.name + "_per_seed.csv"));
  per << std::setprecision(17);
  per << "config_hash,seed,mode,variable,value,min_rate,sum_rate,feasible_fraction,status\n";
  for (const auto& r : rec.rows) {
    per << rec.config_hash << ',' << r.seed << ',' << r.mode << ',' << var << ',' << r.value << ',' << r.min_rate
        << ',' << r.sum_rate << ',' << r.feasible_fraction << ',' << r.status << '\n';
  }

  std::ofstream sum(fs::path(dir) / (cfg.sweep.name + ".csv"));
  sum << std::setprecision(17);
  sum << "config_hash,seeds,mode,variable,value,min_rate_mean,min_rate_std,sum_rate_mean,sum_rate_std,"
         "feasible_fraction,failures\n";
  for (const auto& s : rec.summary) {
    sum << rec.config_hash << ',' << seeds << ',' << s.mode << ',' << var << ',' << s.value << ',' << s.min_rate_mean
        << ',' << s.min_rate_std << ',' << s.sum_rate_mean << ',' << s.sum_rate_std << ',' << s.feasible_fraction
        << ',' << s.failures << '\n';
  }

  nlohmann::json meta = {{"config_hash", rec.config_hash},
                         {"seeds", cfg.seeds},
                         {"wall_clock_seconds", rec.wall_clock_seconds},
                         {"config", to_json(cfg)}};
  std::ofstream(fs::path(dir) / (cfg.sweep.name + "_run.json")) << meta.dump(2) << '\n';
}

}  // namespace starsr
