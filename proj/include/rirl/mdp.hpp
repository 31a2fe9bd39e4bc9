#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rirl/rng.hpp"

namespace rirl {

inline constexpr double kDistributionTol = 1e-12;
inline constexpr double kValueIterTol = 1e-10;
inline constexpr int kValueIterMaxSweeps = 100000;
inline constexpr double kOccupancyResidualTol = 1e-8;

/// One task's dynamics: a finite controlled Markov process (S, A, mu, P, gamma).
struct Environment {
  int num_states = 0;
  int num_actions = 0;
  double gamma = 0.0;
  Eigen::VectorXd mu;                        // initial state distribution
  std::vector<Eigen::MatrixXd> transitions;  // [a](s, s') = P(s' | s, a)

  /// Throws std::invalid_argument if any field is malformed: rows and mu must
  /// be probability vectors within 1e-12, gamma in [0,1), at least 2 actions.
  void validate() const;
};

/// Deterministic stationary policy.
struct Policy {
  std::vector<int> action_of;
};

/// Post-transition state sequence s_1..s_H of one episode.
struct Trajectory {
  int start_state = 0;
  std::vector<int> states;
  int horizon = 0;
};

struct PlanResult {
  Policy policy;
  Eigen::VectorXd values;    // V(s), normalized by (1 - gamma)
  Eigen::MatrixXd q_values;  // Q(s, a)
  int sweeps = 0;
};

/// S x S matrix whose (s, s') entry is P(s' | s, pi(s)).
Eigen::MatrixXd policy_transition_matrix(const Environment& env, const Policy& pi);

/// Normalized discounted state occupancy of pi. Rewards occur after
/// transition, so visits are counted from s_1 on; the vector sums to 1.
/// Solves (I - gamma P') y = P' mu by LU and scales by (1 - gamma); throws
/// NumericalFailure if the solve residual exceeds 1e-8.
Eigen::VectorXd occupancy(const Environment& env, const Policy& pi);

/// Occupancy with the initial distribution replaced by a point mass on start.
Eigen::VectorXd occupancy_from(const Environment& env, const Policy& pi, int start);

/// H-step truncated occupancy from a point start; l1 mass is 1 - gamma^H.
Eigen::VectorXd occupancy_truncated(const Environment& env, const Policy& pi, int start,
                                    int horizon);

/// Discounted visit weights over the states where actions are taken,
/// i.e. the (unnormalized) t >= 0 measure solving (I - gamma P') w = mu.
/// Under these weights the per-state value shortfall V*(s) - Q*(s, pi(s))
/// integrates exactly to the policy loss.
Eigen::VectorXd discounted_visit_weights(const Environment& env, const Policy& pi);

/// Value iteration on Q(s,a) = sum_s' P(s'|s,a) ((1-gamma) Y(s') + gamma max_a' Q(s',a'))
/// to sup-norm change < 1e-10 (cap 1e5 sweeps), then the greedy policy with
/// ties broken toward the lowest action index.
PlanResult solve_optimal(const Environment& env, const Eigen::VectorXd& reward);

/// reward . occupancy(env, pi)
double policy_value(const Environment& env, const Eigen::VectorXd& reward, const Policy& pi);

/// Value shortfall of pi against the optimal policy under theta_star + task_reward,
/// computed as the dot product with the occupancy difference.
double loss(const Environment& env, const Eigen::VectorXd& task_reward,
            const Eigen::VectorXd& theta_star, const Policy& pi);

/// Samples s_1..s_H and returns the trajectory together with the empirical
/// occupancy (1-gamma) sum_h gamma^(h-1) e_{s_h}, whose l1 mass is 1 - gamma^H.
std::pair<Trajectory, Eigen::VectorXd> rollout(const Environment& env, const Policy& pi,
                                               int start, int horizon, SplitMix64& rng);

/// Dense random environment; mu and each transition row are normalized
/// positive uniforms.
Environment random_environment(int num_states, int num_actions, double gamma, SplitMix64& rng);

}  // namespace rirl
