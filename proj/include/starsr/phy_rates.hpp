// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "starsr/network_model.hpp"
#include "starsr/ris_model.hpp"

namespace starsr {

/// One candidate operating point: rate target, per-user backscatter coefficient,
/// phase split, power and unit-norm beamformers, plus the surface coefficients.
struct DecisionVariables {
  double rate_target = 0.0;
  Eigen::VectorXd eta;
  Eigen::VectorXd tau;
  Eigen::VectorXd power;
  CMatrix w1;  // N x I, column i is w_1i
  CMatrix w2;  // N x I, column i is w_2i
  RisCoefficients ris;
};

struct RateSinr {
  double rate = 0.0;
  double sinr = 0.0;
};

struct RateReport {
  Eigen::VectorXd r1;
  Eigen::VectorXd r2r;
  Eigen::VectorXd r2t;
  Eigen::VectorXd sinr1;
  Eigen::VectorXd sinr2r;
  Eigen::VectorXd sinr2t;
  double min_rate = 0.0;
  // SIC decode orders (strongest first) used for each rate family.
  std::vector<int> order1;
  std::vector<int> order2r;
  std::vector<int> order2t;
};

/// Maximal-ratio combiner g / ||g||. Throws std::domain_error for a zero vector.
CVector mrc_vector(const CVector& g);

/// Indices sorted by strictly descending gain, ties by ascending index.
/// The interference set of a user is everyone ahead of it in this order.
std::vector<int> sic_order(const Eigen::VectorXd& effective_gains);

/// P_j eta_j ||g_1j||^2 |h_1j^H w_1j|^2 for every user.
Eigen::VectorXd phase1_effective_gains(const ChannelRealization& ch, const DecisionVariables& dv);

/// I x I matrix with entry (i, j) = combined channel of SUE i applied to beam j.
CMatrix reflect_combined_channels(const ChannelRealization& ch, const DecisionVariables& dv);
CMatrix transmit_combined_channels(const ChannelRealization& ch, const DecisionVariables& dv);

RateSinr rate_phase1(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg, int i);
RateSinr rate_phase2_reflect(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                             int i);
RateSinr rate_phase2_transmit(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg,
                              int i);

RateReport rate_report(const ChannelRealization& ch, const DecisionVariables& dv, const SystemConfig& cfg);

}  // namespace starsr
