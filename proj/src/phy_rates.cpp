// SPDX-License-Identifier: Apache-2.0
#include "starsr/phy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace starsr {

namespace {

// Received phase-1 gain after MRC: ||g||^2 |h^H w|^2. A zero backscatter
// channel simply contributes nothing.
double phase1_link_gain(const ChannelRealization& ch, const DecisionVariables& dv, int j) {
  const CVector g = ch.g1.col(j);
  if (g.squaredNorm() == 0.0) return 0.0;
  const CVector w_r = mrc_vector(g);
  const double combined = std::norm(w_r.dot(g));
  return combined * std::norm(ch.h1.col(j).dot(dv.w1.col(j)));
}

// ||Theta (sum_j g_2j)^T||^2 for the given side.
double asris_noise_gain(const CMatrix& g2, const CVector& theta_diag) {
  const CVector summed = g2.colwise().sum().transpose();
  return theta_diag.cwiseProduct(summed).squaredNorm();
}

struct Phase2Inputs {
  CMatrix combined;  // I x I
  double noise = 0.0;
};

Phase2Inputs phase2_inputs(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                           RisSide side) {
  const bool reflect = side == RisSide::Reflect;
  const CVector diag = ris_diagonal(dv.ris, side);
  const CMatrix& g2 = reflect ? ch.g2r : ch.g2t;
  Phase2Inputs in;
  in.combined = reflect ? reflect_combined_channels(ch, dv) : transmit_combined_channels(ch, dv);
  in.noise = cfg.bandwidth_hz *
             (asris_noise_gain(g2, diag) * cfg.noise_power_watts.asris + cfg.noise_power_watts.sue);
  return in;
}

Eigen::VectorXd own_gains(const CMatrix& combined, const Eigen::VectorXd& power) {
  Eigen::VectorXd g(combined.rows());
  for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = power(j) * std::norm(combined(j, j));
  return g;
}

// SINR of every user given the interference weights w(i, j) = power_j |c_ij|^2.
template <typename Weight>
Eigen::VectorXd sic_sinr(const std::vector<int>& order, double noise, Weight weight) {
  Eigen::VectorXd sinr(static_cast<Eigen::Index>(order.size()));
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const int i = order[rank];
    double interference = 0.0;
    for (std::size_t k = 0; k < rank; ++k) interference += weight(i, order[k]);
    sinr(i) = weight(i, i) / (interference + noise);
  }
  return sinr;
}

double phase1_rate(double sinr, double tau, const SystemConfig& cfg) {
  return cfg.bandwidth_hz * tau / cfg.symbols_per_bd_symbol * std::log2(1.0 + sinr);
}

double phase2_rate(double sinr, double tau, const SystemConfig& cfg) {
  return cfg.bandwidth_hz * (1.0 - tau) * std::log2(1.0 + sinr);
}

Eigen::VectorXd phase1_sinr_all(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                                std::vector<int>& order) {
  const Eigen::VectorXd gains = phase1_effective_gains(ch, dv);
  order = sic_order(gains);
  const double noise = cfg.bandwidth_hz * cfg.noise_power_watts.bs;
  const double K = cfg.symbols_per_bd_symbol;
  return sic_sinr(order, noise, [&](int i, int j) { return i == j ? K * gains(i) : gains(j); });
}

Eigen::VectorXd phase2_sinr_all(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                                RisSide side, std::vector<int>& order) {
  const Phase2Inputs in = phase2_inputs(ch, dv, cfg, side);
  order = sic_order(own_gains(in.combined, dv.power));
  return sic_sinr(order, in.noise, [&](int i, int j) { return dv.power(j) * std::norm(in.combined(i, j)); });
}

}  // namespace

CVector mrc_vector(const CVector& g) {
  const double n = g.norm();
  if (!(n > 0.0)) throw std::domain_error("mrc_vector: degenerate (zero) channel");
  return g / n;
}

std::vector<int> sic_order(const Eigen::VectorXd& effective_gains) {
  std::vector<int> order(static_cast<std::size_t>(effective_gains.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return effective_gains(a) > effective_gains(b); });
  return order;
}

Eigen::VectorXd phase1_effective_gains(const ChannelRealization& ch, const DecisionVariables& dv) {
  const auto I = dv.power.size();
  Eigen::VectorXd g(I);
  for (Eigen::Index j = 0; j < I; ++j) {
    g(j) = dv.power(j) * dv.eta(j) * phase1_link_gain(ch, dv, static_cast<int>(j));
  }
  return g;
}

CMatrix reflect_combined_channels(const ChannelRealization& ch, const DecisionVariables& dv) {
  const CVector diag = ris_diagonal(dv.ris, RisSide::Reflect);
  const CMatrix cascade = ch.g2r * diag.asDiagonal() * ch.h2 + ch.h3.adjoint();
  return cascade * dv.w2;
}

CMatrix transmit_combined_channels(const ChannelRealization& ch, const DecisionVariables& dv) {
  const CVector diag = ris_diagonal(dv.ris, RisSide::Transmit);
  return ch.g2t * diag.asDiagonal() * ch.h2 * dv.w2;
}

RateSinr rate_phase1(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg, int i) {
  std::vector<int> order;
  const Eigen::VectorXd sinr = phase1_sinr_all(ch, dv, cfg, order);
  return {phase1_rate(sinr(i), dv.tau(i), cfg), sinr(i)};
}

RateSinr rate_phase2_reflect(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                             int i) {
  std::vector<int> order;
  const Eigen::VectorXd sinr = phase2_sinr_all(ch, dv, cfg, RisSide::Reflect, order);
  return {phase2_rate(sinr(i), dv.tau(i), cfg), sinr(i)};
}

RateSinr rate_phase2_transmit(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                              int i) {
  std::vector<int> order;
  const Eigen::VectorXd sinr = phase2_sinr_all(ch, dv, cfg, RisSide::Transmit, order);
  return {phase2_rate(sinr(i), dv.tau(i), cfg), sinr(i)};
}

RateReport rate_report(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg) {
  RateReport rep;
  rep.sinr1 = phase1_sinr_all(ch, dv, cfg, rep.order1);
  rep.sinr2r = phase2_sinr_all(ch, dv, cfg, RisSide::Reflect, rep.order2r);
  rep.sinr2t = phase2_sinr_all(ch, dv, cfg, RisSide::Transmit, rep.order2t);
  const auto I = rep.sinr1.size();
  rep.r1.resize(I);
  rep.r2r.resize(I);
  rep.r2t.resize(I);
  for (Eigen::Index i = 0; i < I; ++i) {
    rep.r1(i) = phase1_rate(rep.sinr1(i), dv.tau(i), cfg);
    rep.r2r(i) = phase2_rate(rep.sinr2r(i), dv.tau(i), cfg);
    rep.r2t(i) = phase2_rate(rep.sinr2t(i), dv.tau(i), cfg);
  }
  rep.min_rate = std::min({rep.r1.minCoeff(), rep.r2r.minCoeff(), rep.r2t.minCoeff()});
  return rep;
}

}  // namespace starsr
