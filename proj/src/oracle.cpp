#include "rirl/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rirl {

HumanOracle::HumanOracle(ThetaVector theta_star, double epsilon)
    : theta_star_(std::move(theta_star)), epsilon_(epsilon) {
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("oracle epsilon must be positive");
  if (theta_star_.theta.lpNorm<Eigen::Infinity>() > 1.0 + kDistributionTol) {
    throw std::invalid_argument("hidden reward must satisfy |theta|_inf <= 1");
  }
}

Verdict HumanOracle::evaluate_bandit(const BanditTask& task, int chosen) const {
  if (chosen < 0 || chosen >= task.num_actions()) {
    throw std::invalid_argument("evaluate_bandit: action out of range");
  }
  const Eigen::VectorXd y = theta_star_.theta + task.r;
  const int astar = best_bandit_action(task, y);
  Verdict v;
  v.loss = y.dot(task.features.col(astar) - task.features.col(chosen));
  v.mistake = v.loss > epsilon_;
  if (v.mistake) v.demo_action = astar;
  return v;
}

Verdict HumanOracle::evaluate_mdp(const Environment& env, const TaskReward& task_reward,
                                  const Policy& pi) const {
  const Eigen::VectorXd y = theta_star_.theta + task_reward;
  const PlanResult plan = solve_optimal(env, y);
  const Eigen::VectorXd eta_star = occupancy(env, plan.policy);
  Verdict v;
  v.loss = y.dot(eta_star - occupancy(env, pi));
  v.mistake = v.loss > epsilon_;
  if (v.mistake) v.demo_occupancy = eta_star;
  return v;
}

bool HumanOracle::check_action(const Environment& env, const TaskReward& task_reward, int s,
                               int a) const {
  if (s < 0 || s >= env.num_states || a < 0 || a >= env.num_actions) {
    throw std::invalid_argument("check_action: state or action out of range");
  }
  const PlanResult plan = solve_optimal(env, theta_star_.theta + task_reward);
  return plan.q_values(s, a) < plan.values(s) - epsilon_;
}

std::pair<Trajectory, Eigen::VectorXd> HumanOracle::demo_trajectory(
    const Environment& env, const TaskReward& task_reward, int start, int horizon,
    SplitMix64& rng) const {
  const PlanResult plan = solve_optimal(env, theta_star_.theta + task_reward);
  return rollout(env, plan.policy, start, horizon, rng);
}

Eigen::VectorXd HumanOracle::demonstrate_occupancy(const Environment& env,
                                                   const TaskReward& task_reward) const {
  const PlanResult plan = solve_optimal(env, theta_star_.theta + task_reward);
  return occupancy(env, plan.policy);
}

int HumanOracle::worst_tied_action(const BanditTask& task, const std::vector<int>& tied) const {
  if (tied.empty()) throw std::invalid_argument("worst_tied_action: empty tie set");
  const Eigen::VectorXd y = theta_star_.theta + task.r;
  int worst = tied.front();
  double worst_value = y.dot(task.features.col(worst));
  for (int a : tied) {
    const double value = y.dot(task.features.col(a));
    if (value < worst_value) {
      worst = a;
      worst_value = value;
    }
  }
  return worst;
}

std::optional<BanditTask> HumanOracle::identification_probe(
    const Eigen::VectorXd& center) const {
  if (center.size() != theta_star_.theta.size()) {
    throw std::invalid_argument("identification_probe: dimension mismatch");
  }
  const Eigen::VectorXd gap = theta_star_.theta - center;
  int j = 0;
  const double err = gap.cwiseAbs().maxCoeff(&j);
  if (err <= epsilon_) return std::nullopt;
  BanditTask task;
  const int d = static_cast<int>(center.size());
  task.features = Eigen::MatrixXd::Zero(d, 2);
  task.features(j, 1) = 1.0;
  task.r = -center;
  return task;
}

}  // namespace rirl
