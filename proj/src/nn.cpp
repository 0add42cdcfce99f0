// SPDX-License-Identifier: Apache-2.0
#include "starsr/nn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starsr::nn {

namespace {
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
}

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output sizes");
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    if (in < 1 || out < 1) throw std::invalid_argument("Mlp layer sizes must be positive");
    layers_.push_back({offset, offset + static_cast<Eigen::Index>(in) * out, in, out});
    offset += static_cast<Eigen::Index>(in) * out + out;
  }
  params_ = VectorXd::Zero(offset);
}

void Mlp::init(Philox& rng, double output_scale) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(L.in));
    const double scale = l + 1 == layers_.size() ? output_scale : 1.0;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(L.in) * L.out; ++k) {
      params_(L.weight_offset + k) = scale * rng.uniform(-bound, bound);
    }
    params_.segment(L.bias_offset, L.out).setZero();
  }
}

void Mlp::check_input(Eigen::Index rows) const {
  if (rows != input_dim()) {
    throw std::invalid_argument("Mlp input has " + std::to_string(rows) + " rows, expected " +
                                std::to_string(input_dim()));
  }
}

VectorXd Mlp::forward(const VectorXd& x) const {
  MatrixXd out = forward(MatrixXd(x));
  return out.col(0);
}

MatrixXd Mlp::forward(const MatrixXd& x) const {
  check_input(x.rows());
  MatrixXd a = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    Eigen::Map<const MatrixXd> W(params_.data() + L.weight_offset, L.out, L.in);
    Eigen::Map<const VectorXd> b(params_.data() + L.bias_offset, L.out);
    MatrixXd z = W * a;
    z.colwise() += b;
    if (l + 1 < layers_.size()) z = z.array().tanh().matrix();
    a = std::move(z);
  }
  return a;
}

MatrixXd Mlp::forward(const MatrixXd& x, MlpCache& cache) const {
  check_input(x.rows());
  cache.activations.resize(layers_.size() + 1);
  cache.activations[0] = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& L = layers_[l];
    Eigen::Map<const MatrixXd> W(params_.data() + L.weight_offset, L.out, L.in);
    Eigen::Map<const VectorXd> b(params_.data() + L.bias_offset, L.out);
    MatrixXd z = W * cache.activations[l];
    z.colwise() += b;
    if (l + 1 < layers_.size()) z = z.array().tanh().matrix();
    cache.activations[l + 1] = std::move(z);
  }
  return cache.activations.back();
}

MatrixXd Mlp::backward(const MlpCache& cache, const MatrixXd& upstream, VectorXd& grad) const {
  if (grad.size() == 0) grad = VectorXd::Zero(params_.size());
  if (grad.size() != params_.size()) throw std::invalid_argument("Mlp::backward: gradient size mismatch");
  if (cache.activations.size() != layers_.size() + 1) throw std::invalid_argument("Mlp::backward: stale cache");
  MatrixXd delta = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& L = layers_[l];
    Eigen::Map<const MatrixXd> W(params_.data() + L.weight_offset, L.out, L.in);
    Eigen::Map<MatrixXd> dW(grad.data() + L.weight_offset, L.out, L.in);
    Eigen::Map<VectorXd> db(grad.data() + L.bias_offset, L.out);
    const MatrixXd& input = cache.activations[l];
    dW.noalias() += delta * input.transpose();
    db += delta.rowwise().sum();
    MatrixXd back = W.transpose() * delta;
    if (l > 0) back.array() *= 1.0 - input.array().square();
    delta = std::move(back);
  }
  return delta;
}

VectorXd Mlp::backward(const VectorXd& x, const VectorXd& upstream) const {
  MlpCache cache;
  forward(MatrixXd(x), cache);
  VectorXd grad;
  backward(cache, MatrixXd(upstream), grad);
  return grad;
}

double log1m_tanh_sq(double u) {
  const double a = std::abs(u);
  return 2.0 * (std::numbers::ln2 - a - std::log1p(std::exp(-2.0 * a)));
}

GaussianPolicy::GaussianPolicy(int state_dim, int action_dim, const std::vector<int>& hidden, double init_log_std) {
  std::vector<int> sizes{state_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  mean_ = Mlp(sizes);
  log_std_ = VectorXd::Constant(action_dim, init_log_std);
  clamp_log_std();
}

void GaussianPolicy::init(Philox& rng, double output_scale) { mean_.init(rng, output_scale); }

void GaussianPolicy::clamp_log_std() { log_std_ = log_std_.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax); }

PolicySample GaussianPolicy::sample(const VectorXd& state, Philox& rng) const {
  const VectorXd mu = mean_.forward(state);
  PolicySample s;
  s.pre_tanh.resize(mu.size());
  for (Eigen::Index d = 0; d < mu.size(); ++d) s.pre_tanh(d) = mu(d) + std::exp(log_std_(d)) * rng.normal();
  s.action = s.pre_tanh.array().tanh().matrix();
  s.log_prob = log_prob(MatrixXd(state), MatrixXd(s.pre_tanh))(0);
  s.entropy = entropy();
  return s;
}

VectorXd GaussianPolicy::deterministic(const VectorXd& state) const {
  return mean_.forward(state).array().tanh().matrix();
}

VectorXd GaussianPolicy::log_prob(const MatrixXd& states, const MatrixXd& pre_tanh, MlpCache* cache,
                                  MatrixXd* means) const {
  MlpCache local;
  MatrixXd mu = mean_.forward(states, cache ? *cache : local);
  const Eigen::ArrayXd inv_std = (-log_std_.array()).exp();
  const double log_norm = log_std_.sum() + kHalfLog2Pi * static_cast<double>(log_std_.size());
  VectorXd out(pre_tanh.cols());
  for (Eigen::Index q = 0; q < pre_tanh.cols(); ++q) {
    const Eigen::ArrayXd z = (pre_tanh.col(q) - mu.col(q)).array() * inv_std;
    double jac = 0.0;
    for (Eigen::Index d = 0; d < pre_tanh.rows(); ++d) jac += log1m_tanh_sq(pre_tanh(d, q));
    out(q) = -0.5 * z.square().sum() - log_norm - jac;
  }
  if (means) *means = std::move(mu);
  return out;
}

double GaussianPolicy::entropy() const {
  return log_std_.sum() + (0.5 + kHalfLog2Pi) * static_cast<double>(log_std_.size());
}

void GaussianPolicy::log_prob_backward(const MlpCache& cache, const MatrixXd& means, const MatrixXd& pre_tanh,
                                       const VectorXd& weights, double entropy_weight, VectorXd& mean_grad,
                                       VectorXd& log_std_grad) const {
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_.array()).exp();
  MatrixXd d_mu(means.rows(), means.cols());
  if (log_std_grad.size() == 0) log_std_grad = VectorXd::Zero(log_std_.size());
  for (Eigen::Index q = 0; q < means.cols(); ++q) {
    const Eigen::ArrayXd diff = (pre_tanh.col(q) - means.col(q)).array();
    d_mu.col(q) = (weights(q) * diff * inv_var).matrix();
    log_std_grad += (weights(q) * (diff.square() * inv_var - 1.0)).matrix();
  }
  log_std_grad.array() += entropy_weight;
  mean_.backward(cache, d_mu, mean_grad);
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate, Eigen::Index size)
    : kind_(kind), lr_(learning_rate) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("Optimizer: learning rate must be positive");
  if (kind_ == OptimizerKind::Adam) {
    m_ = VectorXd::Zero(size);
    v_ = VectorXd::Zero(size);
  }
}

void Optimizer::step(VectorXd& params, const VectorXd& grad) {
  if (grad.size() != params.size()) throw std::invalid_argument("Optimizer::step: shape mismatch");
  if (!grad.allFinite()) throw std::runtime_error("Optimizer::step: non-finite gradient");
  ++t_;
  if (kind_ == OptimizerKind::Sgd) {
    params.noalias() -= lr_ * grad;
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (m_.size() != params.size()) {
    m_ = VectorXd::Zero(params.size());
    v_ = VectorXd::Zero(params.size());
  }
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps);
}

void Optimizer::restore(std::int64_t steps, VectorXd m, VectorXd v) {
  t_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

void soft_update(VectorXd& target, const VectorXd& source, double rate) {
  target = (1.0 - rate) * target + rate * source;
}

}  // namespace starsr::nn
