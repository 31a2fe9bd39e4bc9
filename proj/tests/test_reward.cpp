#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rirl/mdp.hpp"
#include "rirl/reward.hpp"
#include "test_support.hpp"

using namespace rirl;

namespace {

// For a pair of rewards whose difference is not a constant vector, a task
// that separates their optimal-policy sets: the task reward cancels the
// second reward so every policy ties under it, while under the first the
// self-loop at the worst state loses to jumping to the best state.
struct SeparatingTask {
  Environment env;
  Eigen::VectorXd task_reward;
};

SeparatingTask build_separating_task(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& theta_other, double gamma) {
  const Eigen::VectorXd diff = theta - theta_other;
  int i = 0, j = 0;
  diff.minCoeff(&i);
  diff.maxCoeff(&j);

  const int n = static_cast<int>(theta.size());
  SeparatingTask out;
  out.env.num_states = n;
  out.env.num_actions = 2;
  out.env.gamma = gamma;
  out.env.mu = Eigen::VectorXd::Zero(n);
  out.env.mu(i) = 1.0;
  out.env.transitions.assign(2, Eigen::MatrixXd::Identity(n, n));
  out.env.transitions[1].row(i).setZero();
  out.env.transitions[1](i, j) = 1.0;
  out.task_reward = -theta_other;
  return out;
}

}  // namespace

TEST_CASE("canonicalize subtracts the reference entry") {
  ThetaVector theta;
  theta.theta.resize(3);
  theta.theta << 0.5, -0.2, 0.1;
  const ThetaVector canon = canonicalize(theta, 0);
  CHECK(canon.theta(0) == 0.0);
  CHECK(canon.theta(1) == doctest::Approx(-0.7).epsilon(1e-15));
  CHECK(canon.theta(2) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(canon.s_ref == 0);
}

TEST_CASE("canonicalize is idempotent and collapses constant shifts") {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    ThetaVector theta;
    theta.theta = testing::random_reward(6, 1.0, rng);
    const int s_ref = rng.uniform_int(6);
    const ThetaVector once = canonicalize(theta, s_ref);
    const ThetaVector twice = canonicalize(once, s_ref);
    CHECK((once.theta - twice.theta).lpNorm<Eigen::Infinity>() == 0.0);

    ThetaVector shifted;
    shifted.theta = theta.theta.array() + 3.0;
    const ThetaVector canon_shifted = canonicalize(shifted, s_ref);
    CHECK((canon_shifted.theta - once.theta).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("behavioral equivalence is exactly the constant-shift relation") {
  SplitMix64 rng(3);
  ThetaVector theta;
  theta.theta = testing::random_reward(5, 1.0, rng);
  ThetaVector shifted;
  shifted.theta = theta.theta.array() + 0.7;
  CHECK(behaviorally_equivalent(theta, shifted));

  const double tol = 1e-9;
  ThetaVector perturbed = theta;
  perturbed.theta(2) += 10.0 * tol;
  CHECK_FALSE(behaviorally_equivalent(theta, perturbed, tol));

  ThetaVector wrong_size;
  wrong_size.theta = testing::random_reward(4, 1.0, rng);
  CHECK_THROWS_AS(behaviorally_equivalent(theta, wrong_size), std::invalid_argument);
}

TEST_CASE("equivalent rewards share optimal-policy sets on random tasks") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Environment env = random_environment(4, 2, rng.uniform(0.2, 0.95), rng);
    const Eigen::VectorXd theta = testing::random_reward(4, 1.0, rng);
    const Eigen::VectorXd shifted = theta.array() + rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd r = testing::random_reward(4, 1.0, rng);
    CHECK(testing::optimal_policy_set(env, r + theta) ==
          testing::optimal_policy_set(env, r + shifted));
  }
}

TEST_CASE("non-equivalent rewards are separated by a constructed task") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd theta = testing::random_reward(4, 1.0, rng);
    Eigen::VectorXd other = testing::random_reward(4, 1.0, rng);
    const Eigen::VectorXd diff = theta - other;
    if (diff.maxCoeff() - diff.minCoeff() < 1e-6) continue;

    const SeparatingTask task = build_separating_task(theta, other, 0.9);
    const auto set_theta = testing::optimal_policy_set(task.env, task.task_reward + theta);
    const auto set_other = testing::optimal_policy_set(task.env, task.task_reward + other);
    // Under task_reward + other every policy ties; under task_reward + theta
    // the self-loop at the low state is suboptimal.
    CHECK(set_other.size() ==
          static_cast<std::size_t>(policy_count(task.env.num_states, task.env.num_actions)));
    CHECK(set_theta != set_other);
  }
}

TEST_CASE("sample_theta is reproducible and respects the reference state") {
  SplitMix64 rng_a(99);
  SplitMix64 rng_b(99);
  const ThetaVector a = sample_theta(8, std::nullopt, rng_a);
  const ThetaVector b = sample_theta(8, std::nullopt, rng_b);
  CHECK((a.theta - b.theta).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.theta.lpNorm<Eigen::Infinity>() <= 1.0);

  SplitMix64 rng_c(100);
  const ThetaVector c = sample_theta(8, 3, rng_c);
  CHECK(c.theta(3) == 0.0);
  CHECK(c.s_ref == 3);
}

TEST_CASE("sample_theta coordinates average to zero") {
  SplitMix64 rng(123);
  const int samples = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < samples; ++i) sum += sample_theta(4, std::nullopt, rng).theta;
  const Eigen::VectorXd mean = sum / samples;
  for (int k = 0; k < 4; ++k) {
    CHECK(mean(k) >= -0.02);
    CHECK(mean(k) <= 0.02);
  }
}

TEST_CASE("distinct canonical representatives are never equivalent") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const ThetaVector a = sample_theta(5, 0, rng);
    const ThetaVector b = sample_theta(5, 0, rng);
    const bool identical = (a.theta - b.theta).lpNorm<Eigen::Infinity>() <= 1e-9;
    CHECK(behaviorally_equivalent(a, b) == identical);
  }
}
