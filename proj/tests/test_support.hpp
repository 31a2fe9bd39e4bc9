#pragma once

// Test-only oracles kept independent of the library's solver paths: policy
// enumeration by brute force, Monte Carlo estimators, and optimal-policy-set
// extraction. Shared by the unit suites and the acceptance runner.

#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "rirl/bandit.hpp"
#include "rirl/mdp.hpp"
#include "rirl/rng.hpp"

namespace rirl::testing {

/// Best achievable start-value over every deterministic policy, by direct
/// enumeration of reward . occupancy.
inline double brute_force_best_value(const Environment& env, const Eigen::VectorXd& reward) {
  const std::int64_t count = policy_count(env.num_states, env.num_actions);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < count; ++i) {
    const Policy pi = policy_from_index(i, env.num_states, env.num_actions);
    best = std::max(best, policy_value(env, reward, pi));
  }
  return best;
}

/// Indices of all policies whose start-value is within gap_tol of the best.
inline std::set<std::int64_t> optimal_policy_set(const Environment& env,
                                                 const Eigen::VectorXd& reward,
                                                 double gap_tol = 1e-8) {
  const std::int64_t count = policy_count(env.num_states, env.num_actions);
  std::vector<double> values(count);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < count; ++i) {
    values[i] = policy_value(env, reward, policy_from_index(i, env.num_states, env.num_actions));
    best = std::max(best, values[i]);
  }
  std::set<std::int64_t> out;
  for (std::int64_t i = 0; i < count; ++i) {
    if (values[i] >= best - gap_tol) out.insert(i);
  }
  return out;
}

struct MonteCarloMean {
  Eigen::VectorXd mean;
  Eigen::VectorXd std_error;
};

/// Sample mean and per-coordinate standard error of the empirical occupancy
/// over repeated truncated rollouts.
inline MonteCarloMean monte_carlo_occupancy(const Environment& env, const Policy& pi, int start,
                                            int horizon, int samples, SplitMix64& rng) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(env.num_states);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(env.num_states);
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd z = rollout(env, pi, start, horizon, rng).second;
    sum += z;
    sum_sq += z.cwiseProduct(z);
  }
  MonteCarloMean out;
  out.mean = sum / samples;
  const Eigen::VectorXd variance =
      (sum_sq / samples - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0);
  out.std_error = (variance / samples).cwiseSqrt();
  return out;
}

/// Monte Carlo estimate (mean, standard error) of the normalized discounted
/// return of pi from the initial distribution; the horizon is chosen so the
/// truncated tail is far below the standard error.
inline std::pair<double, double> monte_carlo_value(const Environment& env,
                                                   const Eigen::VectorXd& reward,
                                                   const Policy& pi, int samples,
                                                   SplitMix64& rng) {
  const int horizon =
      static_cast<int>(std::ceil(std::log(1e-12) / std::log(std::max(env.gamma, 1e-6))));
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const int start = rng.categorical(env.mu);
    const Eigen::VectorXd z = rollout(env, pi, start, horizon, rng).second;
    const double value = reward.dot(z);
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / samples;
  const double variance = std::max(0.0, sum_sq / samples - mean * mean);
  return {mean, std::sqrt(variance / samples)};
}

/// Random reward vector with entries uniform in [-bound, bound].
inline Eigen::VectorXd random_reward(int dim, double bound, SplitMix64& rng) {
  Eigen::VectorXd r(dim);
  for (int i = 0; i < dim; ++i) r(i) = rng.uniform(-bound, bound);
  return r;
}

inline Policy random_policy(int num_states, int num_actions, SplitMix64& rng) {
  Policy pi;
  pi.action_of.resize(num_states);
  for (int s = 0; s < num_states; ++s) pi.action_of[s] = rng.uniform_int(num_actions);
  return pi;
}

}  // namespace rirl::testing
