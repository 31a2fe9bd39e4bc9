#include "rirl/bandit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rirl/errors.hpp"

namespace rirl {

namespace {

Eigen::VectorXd drop_coordinate(const Eigen::VectorXd& v, int index) {
  Eigen::VectorXd out(v.size() - 1);
  int k = 0;
  for (int i = 0; i < v.size(); ++i) {
    if (i != index) out(k++) = v(i);
  }
  return out;
}

std::int64_t checked_policy_count(int num_states, int num_actions) {
  const std::int64_t n = policy_count(num_states, num_actions);
  if (n < 0) {
    throw PolicySpaceTooLarge("policy space |A|^|S| exceeds " +
                              std::to_string(kPolicyEnumerationGuard));
  }
  return n;
}

}  // namespace

void BanditTask::validate() const {
  if (num_actions() < 2) throw std::invalid_argument("bandit task needs at least two actions");
  if (r.size() != dim()) throw std::invalid_argument("bandit task reward has wrong length");
  if (!features.allFinite() || !r.allFinite()) {
    throw std::invalid_argument("bandit task has non-finite entries");
  }
  for (int i = 0; i < num_actions(); ++i) {
    if (features.col(i).lpNorm<1>() > 1.0 + kColumnNormTol) {
      throw std::invalid_argument("bandit feature column " + std::to_string(i) +
                                  " has l1 norm > 1");
    }
  }
}

void FeatureMDP::validate() const {
  env.validate();
  if (phi.rows() != env.num_states) throw std::invalid_argument("phi has wrong row count");
  if (phi.cwiseAbs().maxCoeff() > 1.0 + kColumnNormTol) {
    throw std::invalid_argument("state features must satisfy |phi(s)|_inf <= 1");
  }
}

std::int64_t policy_count(int num_states, int num_actions) {
  std::int64_t n = 1;
  for (int s = 0; s < num_states; ++s) {
    n *= num_actions;
    if (n > kPolicyEnumerationGuard) return -1;
  }
  return n;
}

Policy policy_from_index(std::int64_t index, int num_states, int num_actions) {
  Policy pi;
  pi.action_of.resize(num_states);
  for (int s = num_states - 1; s >= 0; --s) {
    pi.action_of[s] = static_cast<int>(index % num_actions);
    index /= num_actions;
  }
  return pi;
}

BanditTask mdp_to_bandit(const Environment& env, const TaskReward& task_reward, int s_ref) {
  if (s_ref < 0 || s_ref >= env.num_states) {
    throw std::invalid_argument("mdp_to_bandit: reference state out of range");
  }
  const std::int64_t count = checked_policy_count(env.num_states, env.num_actions);
  BanditTask task;
  task.features.resize(env.num_states - 1, count);
  for (std::int64_t i = 0; i < count; ++i) {
    const Policy pi = policy_from_index(i, env.num_states, env.num_actions);
    task.features.col(i) = drop_coordinate(occupancy(env, pi), s_ref);
  }
  task.r = drop_coordinate(task_reward, s_ref).array() - task_reward(s_ref);
  return task;
}

BanditTask mdp_to_bandit_simple(const Environment& env, const TaskReward& task_reward) {
  const std::int64_t count = checked_policy_count(env.num_states, env.num_actions);
  BanditTask task;
  task.features.resize(env.num_states, count);
  for (std::int64_t i = 0; i < count; ++i) {
    const Policy pi = policy_from_index(i, env.num_states, env.num_actions);
    task.features.col(i) = occupancy(env, pi);
  }
  task.r = task_reward;
  return task;
}

BanditTask feature_mdp_to_bandit(const FeatureMDP& fmdp, const TaskReward& task_reward) {
  const Environment& env = fmdp.env;
  const std::int64_t count = checked_policy_count(env.num_states, env.num_actions);
  const int d = static_cast<int>(fmdp.phi.cols());
  BanditTask task;
  task.features.resize(d, count);
  for (std::int64_t i = 0; i < count; ++i) {
    const Policy pi = policy_from_index(i, env.num_states, env.num_actions);
    task.features.col(i) = fmdp.phi.transpose() * occupancy(env, pi) / static_cast<double>(d);
  }
  task.r = task_reward;
  return task;
}

MdpTask bandit_to_mdp(const BanditTask& task, double gamma) {
  const int d = task.dim();
  const int k = task.num_actions();
  for (int i = 0; i < k; ++i) {
    if (task.features.col(i).minCoeff() < -kDistributionTol) {
      throw std::invalid_argument("bandit_to_mdp: negative feature entry");
    }
    if (task.features.col(i).lpNorm<1>() > 1.0 + kDistributionTol) {
      throw std::invalid_argument("bandit_to_mdp: feature column with l1 norm > 1");
    }
  }

  MdpTask out;
  out.s_ref = 0;
  Environment& env = out.env;
  env.num_states = d + 1;
  env.num_actions = k;
  env.gamma = gamma;
  env.mu = Eigen::VectorXd::Zero(d + 1);
  env.mu(0) = 1.0;
  env.transitions.assign(k, Eigen::MatrixXd::Zero(d + 1, d + 1));
  for (int a = 0; a < k; ++a) {
    Eigen::VectorXd x = task.features.col(a).cwiseMax(0.0);
    const double mass = x.lpNorm<1>();
    if (mass > 1.0) x /= mass;
    const double x1 = x.lpNorm<1>();
    Eigen::VectorXd row = Eigen::VectorXd::Zero(d + 1);
    row(0) = (1.0 - x1) / (1.0 - gamma * x1);
    for (int j = 0; j < d; ++j) row(j + 1) = (1.0 - gamma) * x(j) / (1.0 - gamma * x1);
    row /= row.sum();
    env.transitions[a].row(0) = row.transpose();
    for (int j = 1; j <= d; ++j) env.transitions[a](j, j) = 1.0;  // absorbing
  }
  out.task_reward.resize(d + 1);
  out.task_reward(0) = 0.0;
  out.task_reward.tail(d) = task.r;
  return out;
}

double embedding_round_trip_error(const BanditTask& task, double gamma) {
  const MdpTask mdp = bandit_to_mdp(task, gamma);
  double worst = 0.0;
  for (int a = 0; a < task.num_actions(); ++a) {
    const Policy constant{std::vector<int>(mdp.env.num_states, a)};
    const Eigen::VectorXd eta = occupancy(mdp.env, constant);
    worst = std::max(worst,
                     std::abs(eta(mdp.s_ref) - (1.0 - task.features.col(a).lpNorm<1>())));
    worst = std::max(
        worst, (eta.tail(task.dim()) - task.features.col(a)).lpNorm<Eigen::Infinity>());
  }
  const Eigen::VectorXd r_back =
      mdp.task_reward.tail(task.dim()).array() - mdp.task_reward(mdp.s_ref);
  worst = std::max(worst, (r_back - task.r).lpNorm<Eigen::Infinity>());
  return worst;
}

int best_bandit_action(const BanditTask& task, const Eigen::VectorXd& effective_reward) {
  const Eigen::VectorXd values = task.features.transpose() * effective_reward;
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return best;
}

double bandit_loss(const BanditTask& task, const Eigen::VectorXd& theta_star, int action) {
  if (action < 0 || action >= task.num_actions()) {
    throw std::invalid_argument("bandit_loss: action out of range");
  }
  const Eigen::VectorXd y = theta_star + task.r;
  const int astar = best_bandit_action(task, y);
  return y.dot(task.features.col(astar) - task.features.col(action));
}

double spread(const Eigen::MatrixXd& features) {
  const int d = static_cast<int>(features.rows());
  const int k = static_cast<int>(features.cols());
  if (k < 1) throw std::invalid_argument("spread: empty feature matrix");
  const Eigen::VectorXd mean = features.rowwise().mean();
  const Eigen::MatrixXd centered = features.colwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() < d) return 0.0;
  const double top = sv(0);
  const double sigma_d = sv(d - 1);
  if (top <= 0.0 || sigma_d < kSpreadRankTol * top) return 0.0;
  return sigma_d;
}

}  // namespace rirl
