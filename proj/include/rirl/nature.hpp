#pragma once

#include <Eigen/Dense>

#include "rirl/bandit.hpp"
#include "rirl/oracle.hpp"

namespace rirl {

/// Width below which a coordinate stops yielding mistakes often enough to
/// probe (10 epsilon: half-length 5 epsilon).
inline double adversary_halt_width(double epsilon) { return 10.0 * epsilon; }

/// Lower-bound adversary. Emits two-action tasks [0, e_j] whose task reward
/// centers the posterior interval of coordinate j, cycling over coordinates
/// in phases and narrowing each interval from the learner's own signals. The
/// hidden reward is held only to cross-check verdict consistency.
class Adversary {
 public:
  Adversary(Eigen::VectorXd theta_star, double epsilon);

  int dim() const { return static_cast<int>(lo_.size()); }
  /// True once every coordinate interval is narrower than 10 epsilon.
  bool exhausted() const;
  /// Next probe task; throws ProtocolViolation if the previous task has not
  /// been answered, or std::logic_error when exhausted.
  BanditTask next();
  /// Folds the learner's information from the last emitted task into the
  /// tracked interval. Throws ProtocolViolation if the verdict would push the
  /// hidden reward outside its interval.
  void observe(int chosen, const Verdict& verdict);

  const Eigen::VectorXd& lower() const { return lo_; }
  const Eigen::VectorXd& upper() const { return hi_; }
  int phase() const { return phase_; }
  int last_coordinate() const { return pending_; }

 private:
  bool active(int j) const { return hi_(j) - lo_(j) >= adversary_halt_width(epsilon_); }

  Eigen::VectorXd theta_star_;
  Eigen::VectorXd lo_, hi_;
  double epsilon_;
  int cursor_ = 0;
  int phase_ = 1;
  int pending_ = -1;
  double pending_mid_ = 0.0;
};

/// Fixed-environment task designer: given the learner's current center,
/// plays the fixed feature matrix with task reward equal to minus the center,
/// so every action ties for the learner and the worst-case tie-break extracts
/// one bit per round. Construction rejects a feature matrix with zero spread.
class Designer {
 public:
  explicit Designer(Eigen::MatrixXd features);

  double spread_value() const { return spread_; }
  int dim() const { return static_cast<int>(features_.rows()); }
  int num_actions() const { return static_cast<int>(features_.cols()); }

  BanditTask next(const Eigen::VectorXd& center) const;

  /// Guaranteed terminal accuracy: epsilon sqrt((K - 1) / 2) / spread.
  double error_bound(double epsilon) const;

 private:
  Eigen::MatrixXd features_;
  double spread_ = 0.0;
};

}  // namespace rirl
