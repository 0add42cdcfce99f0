// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "starsr/nn.hpp"

namespace starsr::nn {

/// Portable text checkpoint. Every value is written as a C99 hex-float so a
/// save/load cycle reproduces parameters and optimizer state bit-for-bit.
///
///   starsr-checkpoint 1
///   entry <name> <meta-count> <meta...> <value-count>
///   <values...>
///   end
class Checkpoint {
 public:
  struct Entry {
    std::string name;
    std::vector<std::int64_t> meta;
    VectorXd data;
  };

  static constexpr int kVersion = 1;

  void put(std::string name, std::vector<std::int64_t> meta, VectorXd data);
  const Entry& at(const std::string& name) const;
  bool contains(const std::string& name) const;
  const std::vector<Entry>& entries() const { return entries_; }

  void put_mlp(const std::string& name, const Mlp& net);
  Mlp get_mlp(const std::string& name) const;
  void put_optimizer(const std::string& name, const Optimizer& opt);
  Optimizer get_optimizer(const std::string& name) const;
  void put_vector(const std::string& name, const VectorXd& v) { put(name, {}, v); }
  VectorXd get_vector(const std::string& name) const { return at(name).data; }

  void save(std::ostream& out) const;
  static Checkpoint load(std::istream& in);
  void save_file(const std::filesystem::path& path) const;
  static Checkpoint load_file(const std::filesystem::path& path);

 private:
  std::vector<Entry> entries_;
};

}  // namespace starsr::nn
