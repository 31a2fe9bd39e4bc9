#include "rirl/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rirl/errors.hpp"

namespace rirl {

namespace {

void check_probability_vector(const Eigen::VectorXd& p, const std::string& what) {
  if (p.minCoeff() < 0.0) {
    throw std::invalid_argument(what + " has a negative entry");
  }
  if (std::abs(p.sum() - 1.0) > kDistributionTol) {
    throw std::invalid_argument(what + " does not sum to 1");
  }
}

Eigen::VectorXd occupancy_impl(const Environment& env, const Policy& pi,
                               const Eigen::VectorXd& mu) {
  const int n = env.num_states;
  const Eigen::MatrixXd ppi_t = policy_transition_matrix(env, pi).transpose();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - env.gamma * ppi_t;
  const Eigen::VectorXd rhs = ppi_t * mu;
  const Eigen::VectorXd y = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(rhs);
  const double residual = (a * y - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= kOccupancyResidualTol)) {
    throw NumericalFailure("occupancy: solve residual " + std::to_string(residual));
  }
  return (1.0 - env.gamma) * y;
}

}  // namespace

void Environment::validate() const {
  if (num_states < 1) throw std::invalid_argument("environment needs at least one state");
  if (num_actions < 2) throw std::invalid_argument("environment needs at least two actions");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  if (mu.size() != num_states) throw std::invalid_argument("mu has wrong length");
  check_probability_vector(mu, "mu");
  if (static_cast<int>(transitions.size()) != num_actions) {
    throw std::invalid_argument("transitions must have one matrix per action");
  }
  for (int a = 0; a < num_actions; ++a) {
    if (transitions[a].rows() != num_states || transitions[a].cols() != num_states) {
      throw std::invalid_argument("transition matrix has wrong shape");
    }
    for (int s = 0; s < num_states; ++s) {
      check_probability_vector(transitions[a].row(s).transpose(),
                               "P[s=" + std::to_string(s) + "][a=" + std::to_string(a) + "]");
    }
  }
}

Eigen::MatrixXd policy_transition_matrix(const Environment& env, const Policy& pi) {
  const int n = env.num_states;
  if (static_cast<int>(pi.action_of.size()) != n) {
    throw std::invalid_argument("policy has wrong length");
  }
  Eigen::MatrixXd ppi(n, n);
  for (int s = 0; s < n; ++s) {
    const int a = pi.action_of[s];
    if (a < 0 || a >= env.num_actions) throw std::invalid_argument("policy action out of range");
    ppi.row(s) = env.transitions[a].row(s);
  }
  return ppi;
}

Eigen::VectorXd occupancy(const Environment& env, const Policy& pi) {
  return occupancy_impl(env, pi, env.mu);
}

Eigen::VectorXd occupancy_from(const Environment& env, const Policy& pi, int start) {
  Eigen::VectorXd point = Eigen::VectorXd::Zero(env.num_states);
  point(start) = 1.0;
  return occupancy_impl(env, pi, point);
}

Eigen::VectorXd occupancy_truncated(const Environment& env, const Policy& pi, int start,
                                    int horizon) {
  const int n = env.num_states;
  const Eigen::MatrixXd ppi_t = policy_transition_matrix(env, pi).transpose();
  Eigen::VectorXd dist = Eigen::VectorXd::Zero(n);
  dist(start) = 1.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  double gpow = 1.0;
  for (int h = 1; h <= horizon; ++h) {
    dist = ppi_t * dist;
    acc += gpow * dist;
    gpow *= env.gamma;
  }
  return (1.0 - env.gamma) * acc;
}

Eigen::VectorXd discounted_visit_weights(const Environment& env, const Policy& pi) {
  const int n = env.num_states;
  const Eigen::MatrixXd ppi_t = policy_transition_matrix(env, pi).transpose();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - env.gamma * ppi_t;
  const Eigen::VectorXd w = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(env.mu);
  const double residual = (a * w - env.mu).lpNorm<Eigen::Infinity>();
  if (!(residual <= kOccupancyResidualTol)) {
    throw NumericalFailure("discounted_visit_weights: solve residual " +
                           std::to_string(residual));
  }
  return w;
}

PlanResult solve_optimal(const Environment& env, const Eigen::VectorXd& reward) {
  const int n = env.num_states;
  const int m = env.num_actions;
  if (reward.size() != n) throw std::invalid_argument("reward has wrong length");

  std::vector<Eigen::VectorXd> immediate(m);
  for (int a = 0; a < m; ++a) {
    immediate[a] = env.transitions[a] * ((1.0 - env.gamma) * reward);
  }

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd vnext(n);
  int sweeps = 0;
  while (sweeps < kValueIterMaxSweeps) {
    vnext = immediate[0] + env.gamma * (env.transitions[0] * v);
    for (int a = 1; a < m; ++a) {
      vnext = vnext.cwiseMax(immediate[a] + env.gamma * (env.transitions[a] * v));
    }
    const double delta = (vnext - v).lpNorm<Eigen::Infinity>();
    v.swap(vnext);
    ++sweeps;
    if (delta < kValueIterTol) break;
  }

  PlanResult result;
  result.sweeps = sweeps;
  result.q_values.resize(n, m);
  for (int a = 0; a < m; ++a) {
    result.q_values.col(a) = immediate[a] + env.gamma * (env.transitions[a] * v);
  }
  result.values.resize(n);
  result.policy.action_of.resize(n);
  for (int s = 0; s < n; ++s) {
    int best = 0;
    for (int a = 1; a < m; ++a) {
      if (result.q_values(s, a) > result.q_values(s, best)) best = a;
    }
    result.policy.action_of[s] = best;
    result.values(s) = result.q_values(s, best);
  }
  return result;
}

double policy_value(const Environment& env, const Eigen::VectorXd& reward, const Policy& pi) {
  return reward.dot(occupancy(env, pi));
}

double loss(const Environment& env, const Eigen::VectorXd& task_reward,
            const Eigen::VectorXd& theta_star, const Policy& pi) {
  const Eigen::VectorXd y = theta_star + task_reward;
  const PlanResult plan = solve_optimal(env, y);
  return y.dot(occupancy(env, plan.policy) - occupancy(env, pi));
}

std::pair<Trajectory, Eigen::VectorXd> rollout(const Environment& env, const Policy& pi,
                                               int start, int horizon, SplitMix64& rng) {
  if (horizon < 1) throw std::invalid_argument("rollout horizon must be >= 1");
  Trajectory traj;
  traj.start_state = start;
  traj.horizon = horizon;
  traj.states.reserve(horizon);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(env.num_states);
  int s = start;
  double gpow = 1.0;
  for (int h = 1; h <= horizon; ++h) {
    s = rng.categorical(env.transitions[pi.action_of[s]].row(s));
    traj.states.push_back(s);
    z(s) += (1.0 - env.gamma) * gpow;
    gpow *= env.gamma;
  }
  return {std::move(traj), std::move(z)};
}

Environment random_environment(int num_states, int num_actions, double gamma, SplitMix64& rng) {
  Environment env;
  env.num_states = num_states;
  env.num_actions = num_actions;
  env.gamma = gamma;
  env.mu.resize(num_states);
  for (int s = 0; s < num_states; ++s) env.mu(s) = rng.uniform(1e-3, 1.0);
  env.mu /= env.mu.sum();
  // Branching factor 2: each (s, a) reaches two distinct states. Dense rows
  // would wash out the per-action value gaps at desk scale.
  env.transitions.assign(num_actions, Eigen::MatrixXd::Zero(num_states, num_states));
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      if (num_states == 1) {
        env.transitions[a](s, 0) = 1.0;
        continue;
      }
      const int first = rng.uniform_int(num_states);
      int second = rng.uniform_int(num_states - 1);
      if (second >= first) ++second;
      const double weight = rng.uniform(0.05, 0.95);
      env.transitions[a](s, first) = weight;
      env.transitions[a](s, second) = 1.0 - weight;
    }
  }
  return env;
}

}  // namespace rirl
