// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>

#include "starsr/mdp_env.hpp"
#include "starsr/random.hpp"

namespace fixtures {

using starsr::cplx;
using starsr::CMatrix;

/// N = M = I = 1 configuration with unit bandwidth and explicit noise.
inline starsr::SystemConfig scalar_config(double noise_bs, double noise_asris, double noise_sue) {
  starsr::SystemConfig cfg;
  cfg.n_bs_antennas = 1;
  cfg.n_ris_elements = 1;
  cfg.n_pairs = 1;
  cfg.bandwidth_hz = 1.0;
  cfg.noise_power_watts = {noise_bs, noise_asris, noise_sue};
  return cfg;
}

inline CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

inline starsr::ChannelRealization scalar_channel(cplx h1, cplx g1, cplx h2, cplx h3, cplx g2r, cplx g2t) {
  starsr::ChannelRealization ch;
  ch.h1 = scalar(h1);
  ch.g1 = scalar(g1);
  ch.h2 = scalar(h2);
  ch.h3 = scalar(h3);
  ch.g2r = scalar(g2r);
  ch.g2t = scalar(g2t);
  return ch;
}

inline starsr::DecisionVariables scalar_decision(double eta, double tau, double power, double beta_t, double beta_r,
                                                 starsr::RisMode mode = starsr::RisMode::Active) {
  starsr::DecisionVariables dv;
  dv.eta = Eigen::VectorXd::Constant(1, eta);
  dv.tau = Eigen::VectorXd::Constant(1, tau);
  dv.power = Eigen::VectorXd::Constant(1, power);
  dv.w1 = scalar(1.0);
  dv.w2 = scalar(1.0);
  dv.ris.beta_t = Eigen::VectorXd::Constant(1, beta_t);
  dv.ris.beta_r = Eigen::VectorXd::Constant(1, beta_r);
  dv.ris.theta_t = Eigen::VectorXd::Zero(1);
  dv.ris.theta_r = Eigen::VectorXd::Zero(1);
  dv.ris.mode = mode;
  return dv;
}

/// Random decision point; `spread` > 0 widens ranges past their bounds so
/// that range constraints are exercised on both sides.
inline starsr::DecisionVariables random_decision(const starsr::SystemConfig& cfg, starsr::RisMode mode,
                                                 starsr::Philox& rng, double spread, double rate_max) {
  const int N = cfg.n_bs_antennas, M = cfg.n_ris_elements, I = cfg.n_pairs;
  const double two_pi = 2.0 * std::numbers::pi;
  auto u = [&](double lo, double hi) { return rng.uniform(lo - spread * (hi - lo), hi + spread * (hi - lo)); };
  starsr::DecisionVariables dv;
  dv.rate_target = rng.uniform(0.0, rate_max);
  dv.eta.resize(I);
  dv.tau.resize(I);
  dv.power.resize(I);
  for (int i = 0; i < I; ++i) {
    dv.eta(i) = u(0.0, 1.0);
    dv.tau(i) = u(0.0, 1.0);
    dv.power(i) = u(0.0, cfg.p_bs_max_watts);
  }
  auto beams = [&] {
    CMatrix w(N, I);
    for (int i = 0; i < I; ++i) {
      for (int n = 0; n < N; ++n) w(n, i) = rng.complex_normal();
      w.col(i).normalize();
    }
    return w;
  };
  dv.w1 = beams();
  dv.w2 = beams();
  dv.ris.mode = mode;
  dv.ris.beta_t.resize(M);
  dv.ris.beta_r.resize(M);
  dv.ris.theta_t.resize(M);
  dv.ris.theta_r.resize(M);
  for (int m = 0; m < M; ++m) {
    dv.ris.theta_t(m) = u(0.0, two_pi);
    dv.ris.theta_r(m) = u(0.0, two_pi);
    if (mode == starsr::RisMode::Passive) {
      dv.ris.beta_t(m) = rng.uniform(0.0, 1.0);
      // Mostly exact complements, occasionally broken.
      dv.ris.beta_r(m) = rng.uniform() < 0.9 ? 1.0 - dv.ris.beta_t(m) : rng.uniform(0.0, 1.0);
    } else {
      dv.ris.beta_t(m) = u(0.0, cfg.p_asris_watts / 2.0);
      dv.ris.beta_r(m) = u(0.0, cfg.p_asris_watts / 2.0);
    }
  }
  // Negative beta would make sqrt(beta) NaN; keep it in range for the rates.
  dv.ris.beta_t = dv.ris.beta_t.cwiseMax(0.0);
  dv.ris.beta_r = dv.ris.beta_r.cwiseMax(0.0);
  return dv;
}

}  // namespace fixtures
