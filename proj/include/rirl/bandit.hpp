#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rirl/mdp.hpp"
#include "rirl/reward.hpp"

namespace rirl {

inline constexpr double kColumnNormTol = 1e-9;
inline constexpr std::int64_t kPolicyEnumerationGuard = 1000000;
inline constexpr double kSpreadRankTol = 1e-10;

/// A finite-action task with one feature column per action; the value of
/// action i under reward y is y . features.col(i).
struct BanditTask {
  Eigen::MatrixXd features;  // d x K, columns x^(i)
  TaskReward r;              // length d

  int dim() const { return static_cast<int>(features.rows()); }
  int num_actions() const { return static_cast<int>(features.cols()); }

  /// K >= 2, column l1 norms <= 1 + 1e-9, reward length d, all finite.
  void validate() const;
};

/// MDP whose reward is linear in per-state features.
struct FeatureMDP {
  Environment env;
  Eigen::MatrixXd phi;  // |S| x d, row s = phi(s), |phi(s)|_inf <= 1

  void validate() const;
};

/// An MDP task plus the reference state used by the bandit embedding.
struct MdpTask {
  Environment env;
  TaskReward task_reward;
  int s_ref = 0;
};

/// Number of deterministic policies |A|^|S|, or -1 if it exceeds the guard.
std::int64_t policy_count(int num_states, int num_actions);

/// Lexicographic policy enumeration: index 0 is all-zeros and the action in
/// the last state varies fastest. Column i of every conversion below
/// corresponds to policy_from_index(i, ...).
Policy policy_from_index(std::int64_t index, int num_states, int num_actions);

/// One bandit action per deterministic policy; features are occupancies with
/// the s_ref coordinate dropped and the task reward is re-anchored so its
/// s_ref entry is zero. Losses against a canonical theta are preserved
/// exactly. Throws PolicySpaceTooLarge above 1e6 policies.
BanditTask mdp_to_bandit(const Environment& env, const TaskReward& task_reward, int s_ref);

/// The plain |S|-dimensional embedding (columns are full occupancies, reward
/// unchanged), used by the trajectory learner.
BanditTask mdp_to_bandit_simple(const Environment& env, const TaskReward& task_reward);

/// Columns are discounted expected feature sums divided by d; reward vectors
/// pass through unchanged.
BanditTask feature_mdp_to_bandit(const FeatureMDP& fmdp, const TaskReward& task_reward);

/// Inverse embedding: builds a (d+1)-state MDP whose K single-action
/// occupancies at the initial reference state reproduce the columns of the
/// task. Requires nonnegative columns with l1 norm <= 1.
MdpTask bandit_to_mdp(const BanditTask& task, double gamma);

/// Worst deviation over the inverse-embedding identities: the K single-action
/// occupancies of bandit_to_mdp(task) must reproduce the feature columns, the
/// reference-state occupancy must equal 1 - |x|_1, and re-anchoring the task
/// reward must reproduce r.
double embedding_round_trip_error(const BanditTask& task, double gamma);

/// Lowest-index maximizer of effective_reward . column.
int best_bandit_action(const BanditTask& task, const Eigen::VectorXd& effective_reward);

/// Value shortfall of the chosen action against the best action under
/// theta_star + r; always >= 0.
double bandit_loss(const BanditTask& task, const Eigen::VectorXd& theta_star, int action);

/// d-th largest singular value of the column-centered feature matrix;
/// singular values below 1e-10 of the largest count as zero.
double spread(const Eigen::MatrixXd& features);

}  // namespace rirl
