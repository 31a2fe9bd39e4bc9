#include "rirl/learners.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rirl/errors.hpp"
#include "rirl/serialize.hpp"

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

void log_cut_records(RunLog* log, long round, const std::vector<CutLogRecord>& records) {
  if (!log) return;
  for (const CutLogRecord& rec : records) {
    log->add({{"type", "cut"},
              {"round", round},
              {"clamp", rec.clamp},
              {"cut_vector", vector_to_json(rec.direction)},
              {"center", vector_to_json(rec.center_after)},
              {"log_volume", rec.log_volume_after}});
  }
}

void log_round(RunLog* log, long round, long task_id, int chosen, const Verdict& verdict,
               bool cut_applied, double log_volume_offset, const Eigen::VectorXd& center,
               const Eigen::VectorXd* theta_star) {
  if (!log) return;
  nlohmann::json line{{"type", "round"},
                      {"round", round},
                      {"task_id", task_id},
                      {"chosen_action", chosen},
                      {"loss", verdict.loss},
                      {"mistake", verdict.mistake},
                      {"cut_applied", cut_applied},
                      {"log_volume", log_volume_offset}};
  if (theta_star) {
    line["center_error_inf"] = (center - *theta_star).lpNorm<Eigen::Infinity>();
  }
  log->add(std::move(line));
}

/// Tracks the smallest per-cut log-volume drop out of a chained record list.
void fold_cut_drops(double log_volume_before, const std::vector<CutLogRecord>& records,
                    double* min_drop) {
  double prev = log_volume_before;
  for (const CutLogRecord& rec : records) {
    *min_drop = std::min(*min_drop, prev - rec.log_volume_after);
    prev = rec.log_volume_after;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Identification through chosen tasks
// ---------------------------------------------------------------------------

std::pair<Environment, int> build_probe_environment(int num_states, double gamma) {
  if (num_states < 2) throw std::invalid_argument("probe environment needs >= 2 states");
  constexpr int kRef = 0;
  Environment env;
  env.num_states = num_states;
  env.num_actions = 2;
  env.gamma = gamma;
  env.mu = Eigen::VectorXd::Constant(num_states, 1.0 / (num_states - 1));
  env.mu(kRef) = 0.0;
  env.transitions.assign(2, Eigen::MatrixXd::Zero(num_states, num_states));
  for (int s = 0; s < num_states; ++s) {
    env.transitions[0](s, s) = 1.0;     // self-loop
    env.transitions[1](s, kRef) = 1.0;  // jump to the reference state
  }
  return {std::move(env), kRef};
}

int identification_task_count(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("identification accuracy must be in (0, 1)");
  }
  return static_cast<int>(std::ceil(std::log2(2.0 / epsilon)));
}

IdentificationResult omniscient_identify(const HumanOracle& oracle, int num_states,
                                         double gamma, double epsilon) {
  auto [env, s_ref] = build_probe_environment(num_states, gamma);
  const int rounds = identification_task_count(epsilon);

  Eigen::VectorXd lo = Eigen::VectorXd::Constant(num_states, -1.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(num_states, 1.0);
  lo(s_ref) = hi(s_ref) = 0.0;

  for (int t = 0; t < rounds; ++t) {
    TaskReward r = -0.5 * (lo + hi);
    r(s_ref) = 0.0;
    const Eigen::VectorXd eta = oracle.demonstrate_occupancy(env, r);
    for (int s = 0; s < num_states; ++s) {
      if (s == s_ref) continue;
      const double mid = 0.5 * (lo(s) + hi(s));
      // Zero occupancy at s means the demonstrated policy leaves immediately,
      // hence theta*(s) <= -r(s) = mid; otherwise theta*(s) >= mid.
      if (eta(s) <= kOccupancyZeroTol) {
        hi(s) = mid;
      } else {
        lo(s) = mid;
      }
    }
  }

  IdentificationResult result;
  result.tasks_used = rounds;
  result.theta_hat.theta = 0.5 * (lo + hi);
  result.theta_hat.theta(s_ref) = 0.0;
  result.theta_hat.s_ref = s_ref;
  result.per_state_intervals.reserve(num_states);
  for (int s = 0; s < num_states; ++s) result.per_state_intervals.emplace_back(lo(s), hi(s));
  return result;
}

// ---------------------------------------------------------------------------
// Ellipsoid learner
// ---------------------------------------------------------------------------

double ellipsoid_mistake_bound(int dim, double epsilon) {
  const double d = static_cast<double>(dim);
  return 2.0 * d * (d + 1.0) * std::log(4.0 * std::sqrt(d) / epsilon);
}

EllipsoidLearner::EllipsoidLearner(int dim, double epsilon) : dim_(dim), epsilon_(epsilon) {
  if (dim < 1) throw std::invalid_argument("learner dimension must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("learner epsilon must be positive");
  if (dim >= 2) ell_ = init_box(dim);
}

Eigen::VectorXd EllipsoidLearner::center() const {
  if (dim_ == 1) return Eigen::VectorXd::Constant(1, 0.5 * (lo1_ + hi1_));
  return ell_.center;
}

double EllipsoidLearner::log_volume_offset() const {
  if (dim_ == 1) return std::log(0.5 * (hi1_ - lo1_));
  return ell_.log_volume_offset;
}

double EllipsoidLearner::log_volume_abs() const {
  if (dim_ == 1) return std::log(hi1_ - lo1_);
  return log_volume(ell_);
}

bool EllipsoidLearner::contains_candidate(const Eigen::VectorXd& theta) const {
  if (dim_ == 1) {
    return theta(0) >= lo1_ - kContainmentTol && theta(0) <= hi1_ + kContainmentTol;
  }
  return contains(ell_, theta);
}

int EllipsoidLearner::choose(const BanditTask& task, const TieBreakFn* tie_break) const {
  const Eigen::VectorXd values = task.features.transpose() * (center() + task.r);
  int best = 0;
  for (int a = 1; a < values.size(); ++a) {
    if (values(a) > values(best)) best = a;
  }
  if (tie_break && *tie_break) {
    std::vector<int> tied;
    for (int a = 0; a < values.size(); ++a) {
      if (values(a) == values(best)) tied.push_back(a);
    }
    if (tied.size() > 1) return (*tie_break)(task, tied);
  }
  return best;
}

std::vector<int> EllipsoidLearner::tied_maximizers(const BanditTask& task) const {
  const Eigen::VectorXd values = task.features.transpose() * (center() + task.r);
  const double best = values.maxCoeff();
  std::vector<int> tied;
  for (int a = 0; a < values.size(); ++a) {
    if (values(a) == best) tied.push_back(a);
  }
  return tied;
}

std::vector<CutLogRecord> EllipsoidLearner::update_on_mistake(const BanditTask& task,
                                                              int chosen, int demo_action) {
  note_mistake();
  return apply_demonstration_cut(task.features.col(demo_action) - task.features.col(chosen));
}

std::vector<CutLogRecord> EllipsoidLearner::apply_demonstration_cut(
    const Eigen::VectorXd& direction) {
  std::vector<CutLogRecord> records;
  if (dim_ == 1) {
    const double c = 0.5 * (lo1_ + hi1_);
    if (direction(0) == 0.0) return records;
    if (direction(0) > 0.0) {
      lo1_ = c;
    } else {
      hi1_ = c;
    }
    records.push_back({direction, center(), std::log(hi1_ - lo1_), false});
    return records;
  }
  if (is_degenerate_cut(ell_, direction)) {
    return records;  // carries no information; caller logs the skip
  }
  ell_ = central_cut(ell_, direction);
  records.push_back({direction, ell_.center, log_volume(ell_), false});
  ClampResult clamped = clamp_center(ell_, epsilon_);
  ell_ = std::move(clamped.state);
  for (ClampCutRecord& rec : clamped.cuts) {
    records.push_back(
        {std::move(rec.direction), std::move(rec.center_after), rec.log_volume_after, true});
  }
  return records;
}

// ---------------------------------------------------------------------------
// Task sources
// ---------------------------------------------------------------------------

std::optional<BanditTask> AdversaryTaskSource::next(const Eigen::VectorXd& center) {
  if (adversary_.exhausted()) return std::nullopt;
  return adversary_.next();
}

void AdversaryTaskSource::observe(const BanditTask& task, int chosen, const Verdict& verdict) {
  adversary_.observe(chosen, verdict);
}

std::optional<BanditTask> RandomTaskSource::next(const Eigen::VectorXd& center) {
  BanditTask task;
  task.features.resize(dim_, num_actions_);
  for (int a = 0; a < num_actions_; ++a) {
    Eigen::VectorXd col(dim_);
    for (int i = 0; i < dim_; ++i) col(i) = rng_.uniform(-1.0, 1.0);
    const double norm = col.lpNorm<1>();
    const double target = rng_.next_double();
    if (norm > 0.0) col *= target / norm;
    task.features.col(a) = col;
  }
  task.r.resize(dim_);
  for (int i = 0; i < dim_; ++i) task.r(i) = rng_.uniform(-1.0, 1.0);
  return task;
}

std::optional<BanditTask> ReplayTaskSource::next(const Eigen::VectorXd& center) {
  if (cursor_ >= tasks_.size()) return std::nullopt;
  return tasks_[cursor_++];
}

std::optional<BanditTask> DesignerTaskSource::next(const Eigen::VectorXd& center) {
  if (done_) return std::nullopt;
  return designer_.next(center);
}

void DesignerTaskSource::observe(const BanditTask& task, int chosen, const Verdict& verdict) {
  if (!verdict.mistake) done_ = true;
}

std::optional<BanditTask> ProbeTaskSource::next(const Eigen::VectorXd& center) {
  std::optional<BanditTask> task = oracle_->identification_probe(center);
  if (!task) certified_ = true;
  return task;
}

// ---------------------------------------------------------------------------
// Protocol loops
// ---------------------------------------------------------------------------

BanditRunStats run_bandit_protocol(EllipsoidLearner& learner, BanditTaskSource& source,
                                   const HumanOracle& oracle,
                                   const BanditRunOptions& options) {
  BanditRunStats stats;
  for (long round = 1; round <= options.max_rounds; ++round) {
    std::optional<BanditTask> task = source.next(learner.center());
    if (!task) break;
    learner.advance_round();
    stats.rounds = round;
    if (options.record_stream) stats.emitted_tasks.push_back(*task);

    const int chosen = learner.choose(*task, options.tie_break);
    const Verdict verdict = oracle.evaluate_bandit(*task, chosen);
    bool cut_applied = false;
    if (verdict.mistake) {
      stats.mistakes += 1;
      const double log_volume_before = learner.log_volume_abs();
      const std::vector<CutLogRecord> records =
          learner.update_on_mistake(*task, chosen, *verdict.demo_action);
      cut_applied = !records.empty();
      stats.cuts += static_cast<long>(records.size());
      fold_cut_drops(log_volume_before, records, &stats.min_cut_log_drop);
      log_cut_records(options.log, round, records);
      if (!cut_applied && options.log) {
        options.log->add({{"type", "warning"},
                          {"round", round},
                          {"message", "degenerate cut skipped"}});
      }
    }
    if (options.theta_star_diag &&
        !learner.contains_candidate(*options.theta_star_diag)) {
      stats.theta_always_contained = false;
    }
    log_round(options.log, round, round, chosen, verdict, cut_applied,
              learner.log_volume_offset(), learner.center(), options.theta_star_diag);
    source.observe(*task, chosen, verdict);
  }
  stats.final_center = learner.center();
  return stats;
}

std::optional<MdpTask> AdversaryMdpSource::next(const Eigen::VectorXd& center) {
  if (adversary_.exhausted()) return std::nullopt;
  return bandit_to_mdp(adversary_.next(), gamma_);
}

void AdversaryMdpSource::observe(const MdpTask& task, const Policy& chosen,
                                 const Verdict& verdict) {
  // Off-reference states are absorbing, so the bandit action is the policy's
  // choice at the reference state.
  adversary_.observe(chosen.action_of[task.s_ref], verdict);
}

BanditRunStats run_mdp_protocol(EllipsoidLearner& learner, MdpTaskSource& source,
                                const HumanOracle& oracle, const BanditRunOptions& options) {
  BanditRunStats stats;
  for (long round = 1; round <= options.max_rounds; ++round) {
    std::optional<MdpTask> task = source.next(learner.center());
    if (!task) break;
    learner.advance_round();
    stats.rounds = round;

    const BanditTask embedded = mdp_to_bandit(task->env, task->task_reward, task->s_ref);
    const int chosen_column = learner.choose(embedded, options.tie_break);
    const Policy chosen =
        policy_from_index(chosen_column, task->env.num_states, task->env.num_actions);
    const Verdict verdict = oracle.evaluate_mdp(task->env, task->task_reward, chosen);
    bool cut_applied = false;
    if (verdict.mistake) {
      stats.mistakes += 1;
      learner.note_mistake();
      const Eigen::VectorXd demo_column = drop_coordinate(*verdict.demo_occupancy, task->s_ref);
      const double log_volume_before = learner.log_volume_abs();
      const std::vector<CutLogRecord> records =
          learner.apply_demonstration_cut(demo_column - embedded.features.col(chosen_column));
      cut_applied = !records.empty();
      stats.cuts += static_cast<long>(records.size());
      fold_cut_drops(log_volume_before, records, &stats.min_cut_log_drop);
      log_cut_records(options.log, round, records);
      if (!cut_applied && options.log) {
        options.log->add({{"type", "warning"},
                          {"round", round},
                          {"message", "degenerate cut skipped"}});
      }
    }
    if (options.theta_star_diag &&
        !learner.contains_candidate(*options.theta_star_diag)) {
      stats.theta_always_contained = false;
    }
    log_round(options.log, round, round, chosen_column, verdict, cut_applied,
              learner.log_volume_offset(), learner.center(), options.theta_star_diag);
    source.observe(*task, chosen, verdict);
  }
  stats.final_center = learner.center();
  return stats;
}

// ---------------------------------------------------------------------------
// Trajectory learner
// ---------------------------------------------------------------------------

int trajectory_demo_horizon(double epsilon, double gamma) {
  return static_cast<int>(std::ceil(std::log(12.0 / epsilon) / (1.0 - gamma)));
}

int trajectory_batch_size(double epsilon, double delta, int dim) {
  const double d = static_cast<double>(dim);
  const double updates = 4.0 * d * (d + 1.0) * std::log(6.0 * std::sqrt(d) / epsilon);
  return static_cast<int>(std::ceil(std::log(updates / delta) / (32.0 * epsilon * epsilon)));
}

double trajectory_mistake_bound(int dim, double epsilon, int batch_size) {
  const double d = static_cast<double>(dim);
  return static_cast<double>(batch_size) * 2.0 * d * (d + 1.0) *
         std::log(12.0 * std::sqrt(d) / epsilon);
}

TrajectoryLearner::TrajectoryLearner(int num_states, double epsilon, int demo_horizon,
                                     int batch_size)
    : learner_(num_states, epsilon), demo_horizon_(demo_horizon), batch_size_(batch_size) {
  if (demo_horizon_ < 1) throw std::invalid_argument("demo horizon must be >= 1");
  if (batch_size_ < 1) throw std::invalid_argument("batch size must be >= 1");
  batch_.demo_sum = Eigen::VectorXd::Zero(num_states);
  batch_.policy_sum = Eigen::VectorXd::Zero(num_states);
}

EpisodeResult TrajectoryLearner::episode(const Environment& env, const TaskReward& task_reward,
                                         const HumanOracle& oracle, SplitMix64& rng,
                                         RunLog* log, const Eigen::VectorXd* theta_star_diag) {
  learner_.advance_round();
  EpisodeResult result;
  const PlanResult plan = solve_optimal(env, learner_.center() + task_reward);

  int s = rng.categorical(env.mu);
  for (int step = 0; step < demo_horizon_; ++step) {
    const int a = plan.policy.action_of[s];
    result.steps_taken = step + 1;
    if (!oracle.check_action(env, task_reward, s, a)) {
      s = rng.categorical(env.transitions[a].row(s));
      continue;
    }

    // Flagged action: one mistake, at most one per episode.
    result.mistake = true;
    result.flagged_state = s;
    learner_.note_mistake();
    if (theta_star_diag) {
      // A flagged action must witness a policy suboptimal from s.
      const Eigen::VectorXd y = *theta_star_diag + task_reward;
      const double v_pi = y.dot(occupancy_from(env, plan.policy, s));
      const PlanResult opt = solve_optimal(env, y);
      result.flag_consistent = v_pi < opt.values(s) - oracle.epsilon() + kContainmentTol;
    }

    auto [demo, demo_occ] = oracle.demo_trajectory(env, task_reward, s, demo_horizon_, rng);
    result.demo_mass = demo_occ.lpNorm<1>();
    batch_.demo_sum += demo_occ;
    batch_.policy_sum += occupancy_from(env, plan.policy, s);
    batch_.fill_count += 1;

    if (batch_.fill_count == batch_size_) {
      const Eigen::VectorXd direction = batch_.demo_sum - batch_.policy_sum;
      if (theta_star_diag) {
        result.cut_margin = (*theta_star_diag - learner_.center()).dot(direction) /
                            static_cast<double>(batch_size_);
      }
      const std::vector<CutLogRecord> records = learner_.apply_demonstration_cut(direction);
      result.cut_applied = !records.empty();
      if (result.cut_applied) ++cuts_;
      log_cut_records(log, learner_.round(), records);
      batch_.fill_count = 0;
      batch_.demo_sum.setZero();
      batch_.policy_sum.setZero();
    }
    break;
  }

  if (log) {
    nlohmann::json line{{"type", "episode"},
                        {"round", learner_.round()},
                        {"mistake", result.mistake},
                        {"flagged_state", result.flagged_state},
                        {"cut_applied", result.cut_applied},
                        {"batch_fill", batch_.fill_count},
                        {"log_volume", learner_.log_volume_offset()}};
    if (theta_star_diag) {
      line["center_error_inf"] =
          (learner_.center() - *theta_star_diag).lpNorm<Eigen::Infinity>();
    }
    log->add(std::move(line));
  }
  return result;
}

}  // namespace rirl
