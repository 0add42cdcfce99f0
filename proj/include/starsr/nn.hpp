// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "starsr/random.hpp"

namespace starsr::nn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Activations of every layer for a batch (one sample per column), kept for backward.
struct MlpCache {
  std::vector<MatrixXd> activations;  // activations[0] is the input
};

/// Fully connected network: tanh on hidden layers, identity output.
/// All weights and biases live in one flat parameter vector, layer by layer,
/// each layer as a column-major (out x in) weight block followed by its bias.
class Mlp {
 public:
  Mlp() = default;
  /// sizes = {input, hidden..., output}; at least two entries.
  explicit Mlp(std::vector<int> sizes);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases. The output
  /// layer weights are additionally multiplied by output_scale.
  void init(Philox& rng, double output_scale = 1.0);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  VectorXd& params() { return params_; }
  const VectorXd& params() const { return params_; }
  Eigen::Index param_count() const { return params_.size(); }

  VectorXd forward(const VectorXd& x) const;
  MatrixXd forward(const MatrixXd& x) const;
  MatrixXd forward(const MatrixXd& x, MlpCache& cache) const;

  /// Accumulates dL/dparams into grad (resized and zeroed if empty) given
  /// dL/doutput for the cached batch; returns dL/dinput.
  MatrixXd backward(const MlpCache& cache, const MatrixXd& upstream, VectorXd& grad) const;

  /// Single-sample convenience: returns the parameter gradient.
  VectorXd backward(const VectorXd& x, const VectorXd& upstream) const;

 private:
  struct LayerView {
    Eigen::Index weight_offset;
    Eigen::Index bias_offset;
    int in;
    int out;
  };

  void check_input(Eigen::Index rows) const;

  std::vector<int> sizes_;
  std::vector<LayerView> layers_;
  VectorXd params_;
};

/// Diagonal Gaussian over pre-squash actions with a state-independent log-std;
/// actions are tanh(u).
struct PolicySample {
  VectorXd action;
  VectorXd pre_tanh;
  double log_prob = 0.0;
  double entropy = 0.0;
};

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

class GaussianPolicy {
 public:
  GaussianPolicy() = default;
  GaussianPolicy(int state_dim, int action_dim, const std::vector<int>& hidden, double init_log_std = 0.0);

  void init(Philox& rng, double output_scale = 0.01);

  Mlp& mean_net() { return mean_; }
  const Mlp& mean_net() const { return mean_; }
  VectorXd& log_std() { return log_std_; }
  const VectorXd& log_std() const { return log_std_; }
  int action_dim() const { return mean_.output_dim(); }

  /// Keeps log-std inside [kLogStdMin, kLogStdMax].
  void clamp_log_std();

  PolicySample sample(const VectorXd& state, Philox& rng) const;
  /// tanh(mean(state)).
  VectorXd deterministic(const VectorXd& state) const;

  /// Squashed log density of tanh(u) for each column u of pre_tanh.
  VectorXd log_prob(const MatrixXd& states, const MatrixXd& pre_tanh, MlpCache* cache = nullptr,
                    MatrixXd* means = nullptr) const;
  /// Sum over dimensions of 0.5 ln(2 pi e) + log_std.
  double entropy() const;

  /// Gradients of sum_q weight_q log pi(a_q | s_q) + entropy_weight * entropy
  /// with respect to the mean-network parameters and the log-std vector.
  void log_prob_backward(const MlpCache& cache, const MatrixXd& means, const MatrixXd& pre_tanh,
                         const VectorXd& weights, double entropy_weight, VectorXd& mean_grad,
                         VectorXd& log_std_grad) const;

 private:
  Mlp mean_;
  VectorXd log_std_;
};

/// log(1 - tanh(u)^2), evaluated without cancellation.
double log1m_tanh_sq(double u);

enum class OptimizerKind { Sgd, Adam };

/// Gradient-descent step on a flat parameter vector. Adam uses the usual
/// (0.9, 0.999, 1e-8) moments with bias correction.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, double learning_rate, Eigen::Index size);

  /// Throws std::runtime_error on a non-finite gradient; params are left untouched.
  void step(VectorXd& params, const VectorXd& grad);

  OptimizerKind kind() const { return kind_; }
  double learning_rate() const { return lr_; }
  std::int64_t steps() const { return t_; }
  const VectorXd& first_moment() const { return m_; }
  const VectorXd& second_moment() const { return v_; }
  void restore(std::int64_t steps, VectorXd m, VectorXd v);

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  double lr_ = 1e-3;
  std::int64_t t_ = 0;
  VectorXd m_;
  VectorXd v_;
};

/// target <- (1 - rate) target + rate source.
void soft_update(VectorXd& target, const VectorXd& source, double rate);

}  // namespace starsr::nn
