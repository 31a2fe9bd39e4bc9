#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rirl/bandit.hpp"
#include "rirl/mdp.hpp"
#include "rirl/reward.hpp"
#include "rirl/rng.hpp"

namespace rirl {

/// Outcome of one evaluation round. A demonstration is attached exactly when
/// a mistake was counted.
struct Verdict {
  bool mistake = false;
  double loss = 0.0;
  std::optional<int> demo_action;
  std::optional<Eigen::VectorXd> demo_occupancy;
};

/// The evaluator side of the protocol. It owns the hidden reward and every
/// quantity derived from it (optimal policies, values, losses); learners only
/// ever see Verdicts, demonstrations, and the tie-break / probe hooks that
/// the fixed-environment experiments inject.
class HumanOracle {
 public:
  HumanOracle(ThetaVector theta_star, double epsilon);

  double epsilon() const { return epsilon_; }
  int dim() const { return static_cast<int>(theta_star_.theta.size()); }

  /// Mistake iff the chosen action loses more than epsilon (strict); on a
  /// mistake the lowest-index optimal action is revealed.
  Verdict evaluate_bandit(const BanditTask& task, int chosen) const;

  /// Mistake iff the proposed policy loses more than epsilon (strict); on a
  /// mistake the occupancy of an optimal policy is revealed.
  Verdict evaluate_mdp(const Environment& env, const TaskReward& task_reward,
                       const Policy& pi) const;

  /// Flags action a in state s iff Q*(s, a) < V*(s) - epsilon (strict).
  bool check_action(const Environment& env, const TaskReward& task_reward, int s, int a) const;

  /// H-step rollout of an optimal policy from the state where the learner
  /// erred, plus its empirical occupancy.
  std::pair<Trajectory, Eigen::VectorXd> demo_trajectory(const Environment& env,
                                                         const TaskReward& task_reward,
                                                         int start, int horizon,
                                                         SplitMix64& rng) const;

  /// Unconditional demonstration (the chosen-tasks protocol): occupancy of an
  /// optimal policy for the given task.
  Eigen::VectorXd demonstrate_occupancy(const Environment& env,
                                        const TaskReward& task_reward) const;

  /// Among actions the learner reports as tied, the one with the worst true
  /// value. Simulation-only tie-break device.
  int worst_tied_action(const BanditTask& task, const std::vector<int>& tied) const;

  /// Identification probe: nullopt certifies the center is within epsilon of
  /// the hidden reward in inf-norm; otherwise a two-action forcing task on a
  /// violating coordinate, with task reward equal to minus the center.
  std::optional<BanditTask> identification_probe(const Eigen::VectorXd& center) const;

 private:
  ThetaVector theta_star_;
  double epsilon_;
};

}  // namespace rirl
