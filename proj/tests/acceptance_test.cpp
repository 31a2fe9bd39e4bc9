// Acceptance suite: each criterion reproduces one of the framework's
// guarantees at desk scale and prints a single pass/fail line. Exit status is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rirl/experiment.hpp"
#include "rirl/learners.hpp"
#include "rirl/nature.hpp"
#include "rirl/oracle.hpp"
#include "rirl/serialize.hpp"
#include "test_support.hpp"

using namespace rirl;

namespace {

int g_failures = 0;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::uint64_t i = 0; i < count; ++i) seeds[i] = i;
  return seeds;
}

// Criterion 1: identification through chosen tasks. 200 seeds, |S|=10,
// gamma=0.9, eps=1e-3: every run within 1e-3 using exactly 11 tasks, < 10 s.
void criterion_identification() {
  Timer timer;
  ExperimentConfig config;
  config.kind = ExperimentKind::kIdentify;
  config.num_states = 10;
  config.gamma = 0.9;
  config.epsilon = 1e-3;
  config.seeds = seed_range(200);
  const RunReport run = run_experiment(config);

  bool ok = run.rows.size() == 200;
  for (const RunRow& row : run.rows) {
    ok = ok && row.mistakes == 11 && row.final_center_error <= 1e-3;
  }
  const double elapsed = timer.seconds();
  ok = ok && elapsed < 10.0 && check_bounds(run) == 0;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "200 runs, max error %.3g, %.2f s",
                run.max_final_error(), elapsed);
  report(1, "binary-search identification: 11 tasks, error <= 1e-3", ok, detail);
}

// Criterion 2: mistake bound of the ellipsoid learner, d=5, eps=0.1, against
// the adversarial stream and random streams; containment and per-cut volume
// drops hold every round; < 60 s.
void criterion_mistake_bound() {
  Timer timer;
  ExperimentConfig config;
  config.kind = ExperimentKind::kMistakes;
  config.dim = 5;
  config.epsilon = 0.1;
  config.seeds = seed_range(100);
  config.rounds = 100000;
  config.stream = "adversary";
  const RunReport versus_adversary = run_experiment(config);

  config.stream = "random";
  config.num_arms = 16;
  config.rounds = 500;
  const RunReport versus_random = run_experiment(config);

  const double budget = ellipsoid_mistake_bound(5, 0.1);
  bool ok = budget <= 270.0 && check_bounds(versus_adversary) == 0 &&
            check_bounds(versus_random) == 0;
  long worst = 0;
  for (const RunReport* run : {&versus_adversary, &versus_random}) {
    for (const RunRow& row : run->rows) {
      worst = std::max(worst, row.mistakes);
      ok = ok && row.bound_satisfied && static_cast<double>(row.mistakes) <= budget;
    }
  }
  const double elapsed = timer.seconds();
  ok = ok && elapsed < 60.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "budget %.1f, worst run %ld mistakes, containment+drops folded in, %.2f s",
                budget, worst, elapsed);
  report(2, "ellipsoid mistake bound on adversarial and random streams", ok, detail);
}

// Criterion 3: adversarial lower bound, d=8, eps=0.01, 500 seeds: the
// seed-mean of mistakes is at least 0.8 (d/4) floor(log2(2/(5 eps))) = 8; < 5 min.
void criterion_lower_bound() {
  Timer timer;
  ExperimentConfig config;
  config.kind = ExperimentKind::kLowerBound;
  config.dim = 8;
  config.epsilon = 0.01;
  config.seeds = seed_range(500);
  config.rounds = 100000;
  const RunReport run = run_experiment(config);

  const double floor_value = adversary_mistake_floor(8, 0.01);
  const double threshold = kLowerBoundStatFactor * floor_value;
  const double elapsed = timer.seconds();
  const bool ok = std::abs(threshold - 8.0) < 1e-12 && run.mean_mistakes() >= threshold &&
                  check_bounds(run) == 0 && elapsed < 300.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "mean mistakes %.2f >= %.1f over 500 seeds, %.2f s",
                run.mean_mistakes(), threshold, elapsed);
  report(3, "adversarial stream forces (d/4) log2(2/(5 eps)) mistakes", ok, detail);
}

// Criterion 4: inverse embedding round trip across 1000 random nonnegative
// columns per discount, plus the reference-state occupancy identity.
void criterion_embedding_round_trip() {
  Timer timer;
  bool ok = true;
  double worst = 0.0;
  long columns = 0;
  for (const double gamma : {0.5, 0.9}) {
    SplitMix64 rng(gamma < 0.7 ? 11 : 13);
    while (columns < (gamma < 0.7 ? 1000 : 2000)) {
      const int dim = 2 + rng.uniform_int(5);
      BanditTask task;
      task.features.resize(dim, 2);
      for (int a = 0; a < 2; ++a) {
        Eigen::VectorXd col(dim);
        for (int i = 0; i < dim; ++i) col(i) = rng.next_double();
        col *= rng.next_double() / col.lpNorm<1>();
        task.features.col(a) = col;
        ++columns;
      }
      task.r = testing::random_reward(dim, 1.0, rng);
      worst = std::max(worst, embedding_round_trip_error(task, gamma));
      ok = ok && worst <= 1e-9;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail), "%ld columns, worst deviation %.3g, %.2f s", columns,
                worst, timer.seconds());
  report(4, "bandit -> MDP -> bandit round trip within 1e-9", ok, detail);
}

// Criterion 5: fixed-environment identification with the designer and the
// worst-case tie-break, d=3, K=6, eps=0.05, 50 seeds.
void criterion_fixed_environment() {
  Timer timer;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 6);
  for (int k = 0; k < 3; ++k) {
    x(k, 2 * k) = 0.5;
    x(k, 2 * k + 1) = -0.5;
  }
  const double spread_value = spread(x);

  ExperimentConfig config;
  config.kind = ExperimentKind::kFixedEnv;
  config.feature_matrix = x;
  config.dim = 3;
  config.num_arms = 6;
  config.epsilon = 0.05;
  config.seeds = seed_range(50);
  config.rounds = 1000;
  const RunReport run = run_experiment(config);

  const double error_bound = config.epsilon * std::sqrt((6.0 - 1.0) / 2.0) / spread_value;
  const double budget = ellipsoid_mistake_bound(3, 0.05);
  bool ok = spread_value >= 0.1 && check_bounds(run) == 0;
  for (const RunRow& row : run.rows) {
    ok = ok && row.final_center_error <= error_bound &&
         static_cast<double>(row.mistakes) <= budget;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "spread %.3f, error bound %.4f, max error %.4f, max rounds %ld, %.2f s",
                spread_value, error_bound, run.max_final_error(), run.max_mistakes(),
                timer.seconds());
  report(5, "designer drives the center within the spread-scaled radius", ok, detail);
}

// Criterion 6: trajectory learner with H=48, n=28 at |S|=5, |A|=2, gamma=0.9,
// eps=0.1, delta=0.1: at least 18/20 runs within the mistake budget and every
// demo occupancy mass exactly 1 - gamma^H; < 10 min.
void criterion_trajectory() {
  Timer timer;
  bool ok = trajectory_demo_horizon(0.1, 0.9) == 48 && trajectory_batch_size(0.1, 0.1, 5) == 28;

  ExperimentConfig config;
  config.kind = ExperimentKind::kTrajectory;
  config.num_states = 5;
  config.num_actions = 2;
  config.gamma = 0.9;
  config.epsilon = 0.1;
  config.delta = 0.1;
  config.seeds = seed_range(20);
  config.rounds = 1500;
  const RunReport run = run_experiment(config);

  int satisfied = 0;
  for (const RunRow& row : run.rows) satisfied += row.bound_satisfied ? 1 : 0;
  const double elapsed = timer.seconds();
  ok = ok && satisfied >= 18 && check_bounds(run) == 0 && elapsed < 600.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "H=48 n=28, %d/20 runs within budget %.0f (mean mistakes %.1f), %.2f s",
                satisfied, run.rows.empty() ? 0.0 : run.rows.front().bound,
                run.mean_mistakes(), elapsed);
  report(6, "trajectory mini-batch learner respects its mistake budget", ok, detail);
}

// Criterion 7: constant shifts preserve optimal-policy sets; non-equivalent
// pairs are separated by the constructed two-action task.
void criterion_equivalence() {
  Timer timer;
  SplitMix64 rng(29);
  bool ok = true;

  for (int pair = 0; pair < 500; ++pair) {
    const int states = 4;
    const int actions = 2 + (pair % 2);
    const Environment env = random_environment(states, actions, rng.uniform(0.2, 0.95), rng);
    const Eigen::VectorXd theta = testing::random_reward(states, 1.0, rng);
    const Eigen::VectorXd shifted = theta.array() + rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd r = testing::random_reward(states, 1.0, rng);
    ok = ok && testing::optimal_policy_set(env, r + theta) ==
                   testing::optimal_policy_set(env, r + shifted);
  }

  int separated = 0;
  int attempted = 0;
  while (attempted < 500) {
    const int states = 4;
    const Eigen::VectorXd theta = testing::random_reward(states, 1.0, rng);
    const Eigen::VectorXd other = testing::random_reward(states, 1.0, rng);
    const Eigen::VectorXd diff = theta - other;
    if (diff.maxCoeff() - diff.minCoeff() < 1e-6) continue;
    ++attempted;

    int i = 0, j = 0;
    diff.minCoeff(&i);
    diff.maxCoeff(&j);
    Environment env;
    env.num_states = states;
    env.num_actions = 2;
    env.gamma = 0.9;
    env.mu = Eigen::VectorXd::Zero(states);
    env.mu(i) = 1.0;
    env.transitions.assign(2, Eigen::MatrixXd::Identity(states, states));
    env.transitions[1].row(i).setZero();
    env.transitions[1](i, j) = 1.0;
    const Eigen::VectorXd task_reward = -other;
    if (testing::optimal_policy_set(env, task_reward + theta) !=
        testing::optimal_policy_set(env, task_reward + other)) {
      ++separated;
    }
  }
  ok = ok && separated == 500;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "500 shifted pairs share sets; %d/500 non-equivalent pairs separated, %.2f s",
                separated, timer.seconds());
  report(7, "behavioral equivalence is exactly the constant-shift class", ok, detail);
}

// Criterion 8: oracle equivalences: planner vs brute force (1e-6), the two
// loss forms (1e-9), and Monte Carlo occupancy vs the closed form (3 SE).
void criterion_oracle_equivalence() {
  Timer timer;
  SplitMix64 rng(31);
  bool planner_ok = true, loss_ok = true;
  for (int instance = 0; instance < 200; ++instance) {
    const int states = 2 + rng.uniform_int(4);   // up to 5
    const int actions = 2 + rng.uniform_int(2);  // up to 3
    const Environment env = random_environment(states, actions, rng.uniform(0.2, 0.95), rng);
    const Eigen::VectorXd theta = testing::random_reward(states, 1.0, rng);
    const Eigen::VectorXd r = testing::random_reward(states, 1.0, rng);
    const Eigen::VectorXd y = theta + r;

    const PlanResult plan = solve_optimal(env, y);
    planner_ok = planner_ok && std::abs(env.mu.dot(plan.values) -
                                        testing::brute_force_best_value(env, y)) <= 1e-6;

    const Policy pi = testing::random_policy(states, actions, rng);
    const double via_occupancy = loss(env, r, theta, pi);
    const double via_values = policy_value(env, y, plan.policy) - policy_value(env, y, pi);
    loss_ok = loss_ok && std::abs(via_occupancy - via_values) <= 1e-9;
  }

  bool monte_carlo_ok = true;
  const Environment env = random_environment(4, 2, 0.7, rng);
  const Policy pi = testing::random_policy(4, 2, rng);
  const int horizon = 30;
  const auto mc = testing::monte_carlo_occupancy(env, pi, 0, horizon, 100000, rng);
  const Eigen::VectorXd analytic = occupancy_truncated(env, pi, 0, horizon);
  for (int s = 0; s < 4; ++s) {
    monte_carlo_ok =
        monte_carlo_ok && std::abs(mc.mean(s) - analytic(s)) <= 3.0 * mc.std_error(s) + 1e-12;
  }

  const bool ok = planner_ok && loss_ok && monte_carlo_ok;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "planner/brute force %s, loss forms %s, Monte Carlo %s, %.2f s",
                planner_ok ? "ok" : "FAIL", loss_ok ? "ok" : "FAIL",
                monte_carlo_ok ? "ok" : "FAIL", timer.seconds());
  report(8, "planner, loss forms, and sampling agree with their oracles", ok, detail);
}

}  // namespace

int main() {
  criterion_identification();
  criterion_mistake_bound();
  criterion_lower_bound();
  criterion_embedding_round_trip();
  criterion_fixed_environment();
  criterion_trajectory();
  criterion_equivalence();
  criterion_oracle_equivalence();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria failed\n", g_failures);
  }
  return g_failures;
}
