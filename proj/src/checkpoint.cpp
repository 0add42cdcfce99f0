// SPDX-License-Identifier: Apache-2.0
#include "starsr/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <ios>
#include <stdexcept>

namespace starsr::nn {

namespace {

double parse_double(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw std::runtime_error("checkpoint: bad number '" + token + "'");
  return v;
}

std::string expect_token(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error("checkpoint: unexpected end of input");
  return tok;
}

}  // namespace

void Checkpoint::put(std::string name, std::vector<std::int64_t> meta, VectorXd data) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
    throw std::invalid_argument("checkpoint entry names must be non-empty and whitespace-free");
  }
  for (auto& e : entries_) {
    if (e.name == name) {
      e.meta = std::move(meta);
      e.data = std::move(data);
      return;
    }
  }
  entries_.push_back({std::move(name), std::move(meta), std::move(data)});
}

const Checkpoint::Entry& Checkpoint::at(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("checkpoint has no entry '" + name + "'");
}

bool Checkpoint::contains(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

void Checkpoint::put_mlp(const std::string& name, const Mlp& net) {
  put(name, {net.sizes().begin(), net.sizes().end()}, net.params());
}

Mlp Checkpoint::get_mlp(const std::string& name) const {
  const auto& e = at(name);
  Mlp net(std::vector<int>(e.meta.begin(), e.meta.end()));
  if (net.param_count() != e.data.size()) throw std::runtime_error("checkpoint: mlp '" + name + "' size mismatch");
  net.params() = e.data;
  return net;
}

void Checkpoint::put_optimizer(const std::string& name, const Optimizer& opt) {
  const auto n = opt.first_moment().size();
  VectorXd packed(2 * n);
  packed << opt.first_moment(), opt.second_moment();
  put(name, {static_cast<std::int64_t>(opt.kind()), opt.steps()}, std::move(packed));
  put(name + ".lr", {}, VectorXd::Constant(1, opt.learning_rate()));
}

Optimizer Checkpoint::get_optimizer(const std::string& name) const {
  const auto& e = at(name);
  if (e.meta.size() != 2) throw std::runtime_error("checkpoint: optimizer '" + name + "' malformed");
  const auto kind = static_cast<OptimizerKind>(e.meta[0]);
  const double lr = at(name + ".lr").data(0);
  const auto n = e.data.size() / 2;
  Optimizer opt(kind, lr, n);
  opt.restore(e.meta[1], e.data.head(n), e.data.tail(n));
  return opt;
}

void Checkpoint::save(std::ostream& out) const {
  out << "starsr-checkpoint " << kVersion << '\n';
  const auto flags = out.flags();
  for (const auto& e : entries_) {
    out << "entry " << e.name << ' ' << e.meta.size();
    for (auto m : e.meta) out << ' ' << m;
    out << ' ' << e.data.size() << '\n';
    out << std::hexfloat;
    for (Eigen::Index k = 0; k < e.data.size(); ++k) out << e.data(k) << ((k + 1) % 8 == 0 ? '\n' : ' ');
    out << '\n';
    out.flags(flags);
  }
  out << "end\n";
}

Checkpoint Checkpoint::load(std::istream& in) {
  if (expect_token(in) != "starsr-checkpoint") throw std::runtime_error("checkpoint: missing header");
  const int version = std::stoi(expect_token(in));
  if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint ck;
  for (;;) {
    const std::string tok = expect_token(in);
    if (tok == "end") break;
    if (tok != "entry") throw std::runtime_error("checkpoint: expected 'entry', got '" + tok + "'");
    Entry e;
    e.name = expect_token(in);
    const auto n_meta = std::stoll(expect_token(in));
    for (long long k = 0; k < n_meta; ++k) e.meta.push_back(std::stoll(expect_token(in)));
    const auto n_data = std::stoll(expect_token(in));
    e.data.resize(n_data);
    for (long long k = 0; k < n_data; ++k) e.data(k) = parse_double(expect_token(in));
    ck.entries_.push_back(std::move(e));
  }
  return ck;
}

void Checkpoint::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  save(out);
}

Checkpoint Checkpoint::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path.string());
  return load(in);
}

}  // namespace starsr::nn
