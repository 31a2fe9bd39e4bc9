#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rirl/bandit.hpp"
#include "rirl/ellipsoid.hpp"
#include "rirl/mdp.hpp"
#include "rirl/nature.hpp"
#include "rirl/oracle.hpp"
#include "rirl/reward.hpp"
#include "rirl/serialize.hpp"

namespace rirl {

inline constexpr double kOccupancyZeroTol = 1e-9;

// ---------------------------------------------------------------------------
// Reward identification through chosen tasks
// ---------------------------------------------------------------------------

struct IdentificationResult {
  ThetaVector theta_hat;
  int tasks_used = 0;
  std::vector<std::pair<double, double>> per_state_intervals;
};

/// The probe environment: action 0 self-loops everywhere, action 1 jumps to
/// the reference state (state 0), both self-loop at the reference state, and
/// the initial distribution is uniform off the reference state. Returns the
/// environment and the reference state index.
std::pair<Environment, int> build_probe_environment(int num_states, double gamma);

/// Number of probe tasks needed for accuracy eps: ceil(log2(2 / eps)).
int identification_task_count(double epsilon);

/// Simultaneous per-state binary search. Each round plays the probe
/// environment with task reward set to minus the interval midpoints and
/// halves every interval by the zero-occupancy sign test. Runs exactly
/// identification_task_count(eps) rounds, after which every interval has
/// width <= eps and the midpoints satisfy |theta_hat - theta*|_inf <= eps.
IdentificationResult omniscient_identify(const HumanOracle& oracle, int num_states,
                                         double gamma, double epsilon);

// ---------------------------------------------------------------------------
// Ellipsoid learner (nature chooses the tasks)
// ---------------------------------------------------------------------------

/// Mistake budget of the ellipsoid learner from the volume argument:
/// 2 d (d + 1) ln(4 sqrt(d) / eps).
double ellipsoid_mistake_bound(int dim, double epsilon);

/// Picks one action out of a nonempty set of exactly tied maximizers.
using TieBreakFn = std::function<int(const BanditTask&, const std::vector<int>&)>;

struct CutLogRecord {
  Eigen::VectorXd direction;
  Eigen::VectorXd center_after;
  double log_volume_after = 0.0;
  bool clamp = false;
};

/// Mistake-bounded learner: plays greedily with the ellipsoid center standing
/// in for the hidden reward, and on every mistake makes a central cut with
/// the revealed demonstration followed by a center clamp. Dimension 1 falls
/// back to plain interval bisection.
class EllipsoidLearner {
 public:
  EllipsoidLearner(int dim, double epsilon);

  int dim() const { return dim_; }
  double epsilon() const { return epsilon_; }
  long mistake_count() const { return mistakes_; }
  long round() const { return round_; }
  void advance_round() { ++round_; }

  Eigen::VectorXd center() const;
  double log_volume_offset() const;
  /// Absolute log-volume of the current uncertainty set.
  double log_volume_abs() const;
  bool contains_candidate(const Eigen::VectorXd& theta) const;

  /// Greedy in (center + task reward) . x, lowest index on exact ties; the
  /// optional hook picks among the exactly tied maximizers instead.
  int choose(const BanditTask& task, const TieBreakFn* tie_break = nullptr) const;
  std::vector<int> tied_maximizers(const BanditTask& task) const;

  /// Records one protocol mistake (a cut need not follow, e.g. while a
  /// mini-batch is still filling).
  void note_mistake() { ++mistakes_; }

  /// Demonstration cut with direction x_demo - x_chosen, then center clamp.
  /// Counts the mistake and returns the per-cut records (empty when the cut
  /// is degenerate and was skipped).
  std::vector<CutLogRecord> update_on_mistake(const BanditTask& task, int chosen,
                                              int demo_action);
  /// Cut + clamp from a raw direction; no mistake bookkeeping.
  std::vector<CutLogRecord> apply_demonstration_cut(const Eigen::VectorXd& direction);

 private:
  int dim_;
  double epsilon_;
  EllipsoidState ell_;       // dim >= 2
  double lo1_ = -1.0, hi1_ = 1.0;  // dim == 1
  long mistakes_ = 0;
  long round_ = 0;
};

// ---------------------------------------------------------------------------
// Task sources and protocol loops
// ---------------------------------------------------------------------------

class BanditTaskSource {
 public:
  virtual ~BanditTaskSource() = default;
  /// Next task given the learner's current center; nullopt ends the run.
  virtual std::optional<BanditTask> next(const Eigen::VectorXd& center) = 0;
  virtual void observe(const BanditTask& task, int chosen, const Verdict& verdict) {}
};

class AdversaryTaskSource : public BanditTaskSource {
 public:
  AdversaryTaskSource(Eigen::VectorXd theta_star, double epsilon)
      : adversary_(std::move(theta_star), epsilon) {}
  std::optional<BanditTask> next(const Eigen::VectorXd& center) override;
  void observe(const BanditTask& task, int chosen, const Verdict& verdict) override;
  const Adversary& adversary() const { return adversary_; }

 private:
  Adversary adversary_;
};

/// Columns with l1 norm at most 1 and uniform task rewards.
class RandomTaskSource : public BanditTaskSource {
 public:
  RandomTaskSource(int dim, int num_actions, SplitMix64 rng)
      : dim_(dim), num_actions_(num_actions), rng_(rng) {}
  std::optional<BanditTask> next(const Eigen::VectorXd& center) override;

 private:
  int dim_, num_actions_;
  SplitMix64 rng_;
};

class ReplayTaskSource : public BanditTaskSource {
 public:
  explicit ReplayTaskSource(std::vector<BanditTask> tasks) : tasks_(std::move(tasks)) {}
  std::optional<BanditTask> next(const Eigen::VectorXd& center) override;

 private:
  std::vector<BanditTask> tasks_;
  std::size_t cursor_ = 0;
};

/// Fixed-environment designer stream; stops after the first satisfied round.
class DesignerTaskSource : public BanditTaskSource {
 public:
  explicit DesignerTaskSource(Designer designer) : designer_(std::move(designer)) {}
  std::optional<BanditTask> next(const Eigen::VectorXd& center) override;
  void observe(const BanditTask& task, int chosen, const Verdict& verdict) override;
  const Designer& designer() const { return designer_; }

 private:
  Designer designer_;
  bool done_ = false;
};

/// Mistake-forcing probe loop; stops once the oracle certifies the center.
class ProbeTaskSource : public BanditTaskSource {
 public:
  explicit ProbeTaskSource(const HumanOracle& oracle) : oracle_(&oracle) {}
  std::optional<BanditTask> next(const Eigen::VectorXd& center) override;
  bool certified() const { return certified_; }

 private:
  const HumanOracle* oracle_;
  bool certified_ = false;
};

struct BanditRunStats {
  long rounds = 0;
  long mistakes = 0;
  long cuts = 0;
  bool theta_always_contained = true;
  double min_cut_log_drop = std::numeric_limits<double>::infinity();
  Eigen::VectorXd final_center;
  std::vector<BanditTask> emitted_tasks;  // filled when record_stream is set
};

struct BanditRunOptions {
  long max_rounds = 100000;
  const TieBreakFn* tie_break = nullptr;
  RunLog* log = nullptr;
  const Eigen::VectorXd* theta_star_diag = nullptr;  // containment / error diagnostics
  bool record_stream = false;
};

/// Full evaluation loop: source -> learner -> oracle -> update, with per-round
/// and per-cut records appended to the run log.
BanditRunStats run_bandit_protocol(EllipsoidLearner& learner, BanditTaskSource& source,
                                   const HumanOracle& oracle, const BanditRunOptions& options);

/// MDP-side protocol: each task is embedded through the occupancy conversion,
/// the learner picks a policy, and a mistake reveals the optimal occupancy
/// from which the cut direction is formed.
class MdpTaskSource {
 public:
  virtual ~MdpTaskSource() = default;
  virtual std::optional<MdpTask> next(const Eigen::VectorXd& center) = 0;
  virtual void observe(const MdpTask& task, const Policy& chosen, const Verdict& verdict) {}
};

/// Wraps the adversary's tasks through the bandit-to-MDP embedding, realizing
/// the same lower bound with |S| = d + 1 and two actions.
class AdversaryMdpSource : public MdpTaskSource {
 public:
  AdversaryMdpSource(Eigen::VectorXd theta_star, double epsilon, double gamma)
      : adversary_(std::move(theta_star), epsilon), gamma_(gamma) {}
  std::optional<MdpTask> next(const Eigen::VectorXd& center) override;
  void observe(const MdpTask& task, const Policy& chosen, const Verdict& verdict) override;
  const Adversary& adversary() const { return adversary_; }

 private:
  Adversary adversary_;
  double gamma_;
};

BanditRunStats run_mdp_protocol(EllipsoidLearner& learner, MdpTaskSource& source,
                                const HumanOracle& oracle, const BanditRunOptions& options);

// ---------------------------------------------------------------------------
// Trajectory learner (mini-batched demonstration cuts)
// ---------------------------------------------------------------------------

/// Demo horizon ceil(ln(12 / eps) / (1 - gamma)); the truncated tail then
/// costs at most eps / 6 in l1.
int trajectory_demo_horizon(double epsilon, double gamma);

/// Mini-batch size ceil(ln(4 d (d+1) ln(6 sqrt(d)/eps) / delta) / (32 eps^2)).
int trajectory_batch_size(double epsilon, double delta, int dim);

/// High-probability mistake budget: n * 2 d (d+1) ln(12 sqrt(d) / eps).
double trajectory_mistake_bound(int dim, double epsilon, int batch_size);

struct BatchState {
  int fill_count = 0;
  Eigen::VectorXd demo_sum;    // accumulated empirical demo occupancies
  Eigen::VectorXd policy_sum;  // accumulated analytic occupancies of the agent's policy
};

struct EpisodeResult {
  bool mistake = false;
  int flagged_state = -1;
  int steps_taken = 0;
  bool cut_applied = false;
  double demo_mass = 0.0;       // l1 mass of the demo occupancy (mistakes only)
  double cut_margin = 0.0;      // (theta* - c) . (Z*bar - Zbar) / n, diagnostics only
  bool flag_consistent = true;  // V_pi(s) < V*(s) - eps held numerically at the flag
};

/// One episode per task: act greedily with respect to (center + task reward),
/// stop at the first flagged action, fold the H-step demonstration and the
/// policy's analytic occupancy into the mini-batch, and cut when the batch
/// fills. The learner works in the plain |S|-dimensional embedding.
class TrajectoryLearner {
 public:
  TrajectoryLearner(int num_states, double epsilon, int demo_horizon, int batch_size);

  int dim() const { return learner_.dim(); }
  int demo_horizon() const { return demo_horizon_; }
  int batch_size() const { return batch_size_; }
  long mistake_count() const { return learner_.mistake_count(); }
  long cut_count() const { return cuts_; }
  Eigen::VectorXd center() const { return learner_.center(); }
  const BatchState& batch() const { return batch_; }
  bool contains_candidate(const Eigen::VectorXd& theta) const {
    return learner_.contains_candidate(theta);
  }

  EpisodeResult episode(const Environment& env, const TaskReward& task_reward,
                        const HumanOracle& oracle, SplitMix64& rng, RunLog* log = nullptr,
                        const Eigen::VectorXd* theta_star_diag = nullptr);

 private:
  EllipsoidLearner learner_;
  BatchState batch_;
  int demo_horizon_;
  int batch_size_;
  long cuts_ = 0;
};

}  // namespace rirl
