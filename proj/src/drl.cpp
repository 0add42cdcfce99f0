// SPDX-License-Identifier: Apache-2.0
#include "starsr/drl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starsr::drl {

double TrainingTrace::tail_mean_reward(std::size_t window) const {
  if (episodes.empty()) return 0.0;
  const std::size_t n = std::min(window, episodes.size());
  double sum = 0.0;
  for (std::size_t k = episodes.size() - n; k < episodes.size(); ++k) sum += episodes[k].mean_reward;
  return sum / static_cast<double>(n);
}

void EpisodeAccumulator::add(const StepResult& step) {
  reward_ += step.reward;
  min_rate_ += step.info.objective;
  satisfied_ += step.info.constraints.satisfied();
  ++count_;
}

EpisodeStats EpisodeAccumulator::finish(int episode) const {
  const double n = count_ > 0 ? count_ : 1.0;
  return {episode, reward_ / n, min_rate_ / n, satisfied_ / n};
}

void write_trace_csv(std::ostream& out, const TrainingTrace& trace, const std::string& config_hash,
                     std::uint64_t seed) {
  out << "config_hash,seed,episode,mean_reward,min_rate,satisfied_count\n";
  const auto old = out.precision(17);
  for (const auto& e : trace.episodes) {
    out << config_hash << ',' << seed << ',' << e.episode << ',' << e.mean_reward << ',' << e.min_rate << ','
        << e.satisfied_count << '\n';
  }
  out.precision(old);
}

ReplayBuffer::ReplayBuffer(int capacity, int state_dim, int action_dim)
    : capacity_(capacity),
      s_(state_dim, capacity),
      a_(action_dim, capacity),
      s_next_(state_dim, capacity),
      r_(capacity),
      done_(capacity) {
  if (capacity < 1) throw std::invalid_argument("ReplayBuffer capacity must be positive");
}

void ReplayBuffer::add(const VectorXd& s, const VectorXd& a, double r, const VectorXd& s_next, bool done) {
  s_.col(next_) = s;
  a_.col(next_) = a;
  s_next_.col(next_) = s_next;
  r_(next_) = r;
  done_(next_) = done ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch, Philox& rng) const {
  if (size_ == 0) throw std::logic_error("ReplayBuffer::sample on empty buffer");
  Batch b{MatrixXd(s_.rows(), batch), MatrixXd(a_.rows(), batch), MatrixXd(s_.rows(), batch), VectorXd(batch),
          VectorXd(batch)};
  for (int k = 0; k < batch; ++k) {
    const auto idx = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(size_)));
    b.s.col(k) = s_.col(idx);
    b.a.col(k) = a_.col(idx);
    b.s_next.col(k) = s_next_.col(idx);
    b.r(k) = r_(idx);
    b.done(k) = done_(idx);
  }
  return b;
}

double ppo_advantage(double reward, double value, double next_value, double discount, bool terminal) {
  return reward + (terminal ? 0.0 : discount * next_value) - value;
}

SurrogateResult ppo_surrogate(const VectorXd& log_prob_new, const VectorXd& log_prob_old,
                              const VectorXd& advantages, double clip) {
  const auto n = log_prob_new.size();
  SurrogateResult res;
  res.dobj_dlogp = VectorXd::Zero(n);
  double sum = 0.0;
  int kept = 0;
  for (Eigen::Index q = 0; q < n; ++q) {
    const double ratio = std::exp(log_prob_new(q) - log_prob_old(q));
    if (!std::isfinite(ratio)) {
      ++res.dropped;
      continue;
    }
    const double adv = advantages(q);
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * adv;
    if (clipped < unclipped) {
      sum += clipped;
      ++res.clipped;
    } else {
      sum += unclipped;
      res.dobj_dlogp(q) = unclipped;  // d(rho Omega)/d log pi = rho Omega
    }
    ++kept;
  }
  if (kept > 0) {
    res.objective = sum / kept;
    res.dobj_dlogp /= kept;
  }
  return res;
}

double critic_regression_step(nn::Mlp& critic, nn::Optimizer& opt, const MatrixXd& states, const VectorXd& targets) {
  nn::MlpCache cache;
  const MatrixXd v = critic.forward(states, cache);
  const Eigen::RowVectorXd err = v.row(0) - targets.transpose();
  const double n = static_cast<double>(targets.size());
  VectorXd grad;
  critic.backward(cache, (2.0 / n) * err, grad);
  opt.step(critic.params(), grad);
  return err.squaredNorm() / n;
}

double td3_target(double reward, double q1, double q2, double discount, bool terminal) {
  return reward + (terminal ? 0.0 : discount * std::min(q1, q2));
}

double a3c_kstep_return(const VectorXd& rewards, double bootstrap, double discount) {
  if (rewards.size() < 1) throw std::invalid_argument("a3c_kstep_return needs k >= 1");
  double ret = bootstrap;
  for (Eigen::Index i = rewards.size(); i-- > 0;) ret = rewards(i) + discount * ret;
  return ret;
}

VectorXd a3c_segment_returns(const VectorXd& rewards, double bootstrap, double discount) {
  VectorXd out(rewards.size());
  double ret = bootstrap;
  for (Eigen::Index i = rewards.size(); i-- > 0;) {
    ret = rewards(i) + discount * ret;
    out(i) = ret;
  }
  return out;
}

}  // namespace starsr::drl
