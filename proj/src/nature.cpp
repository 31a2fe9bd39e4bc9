#include "rirl/nature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rirl/errors.hpp"

namespace rirl {

Adversary::Adversary(Eigen::VectorXd theta_star, double epsilon)
    : theta_star_(std::move(theta_star)),
      lo_(Eigen::VectorXd::Constant(theta_star_.size(), -1.0)),
      hi_(Eigen::VectorXd::Constant(theta_star_.size(), 1.0)),
      epsilon_(epsilon) {
  if (!(epsilon_ > 0.0)) throw std::invalid_argument("adversary epsilon must be positive");
  if (theta_star_.lpNorm<Eigen::Infinity>() > 1.0) {
    throw std::invalid_argument("adversary: hidden reward outside [-1, 1]^d");
  }
}

bool Adversary::exhausted() const {
  for (int j = 0; j < dim(); ++j) {
    if (active(j)) return false;
  }
  return true;
}

BanditTask Adversary::next() {
  if (pending_ >= 0) throw ProtocolViolation("adversary: previous task not answered");
  if (exhausted()) throw std::logic_error("adversary: all coordinates exhausted");
  while (!active(cursor_)) {
    ++cursor_;
    if (cursor_ == dim()) {
      cursor_ = 0;
      ++phase_;
    }
  }
  pending_ = cursor_;
  pending_mid_ = 0.5 * (lo_(pending_) + hi_(pending_));
  ++cursor_;
  if (cursor_ == dim()) {
    cursor_ = 0;
    ++phase_;
  }

  BanditTask task;
  task.features = Eigen::MatrixXd::Zero(dim(), 2);
  task.features(pending_, 1) = 1.0;
  task.r = Eigen::VectorXd::Zero(dim());
  task.r(pending_) = -pending_mid_;
  return task;
}

void Adversary::observe(int chosen, const Verdict& verdict) {
  if (pending_ < 0) throw ProtocolViolation("adversary: observe without a pending task");
  const int j = pending_;
  const double mid = pending_mid_;
  pending_ = -1;

  // Action 0 is the zero column, action 1 the basis column. Each (action,
  // verdict) pair pins theta(j) + r(j) to one side of +-epsilon.
  if (chosen == 0) {
    if (verdict.mistake) {
      lo_(j) = std::max(lo_(j), mid + epsilon_);
    } else {
      hi_(j) = std::min(hi_(j), mid + epsilon_);
    }
  } else if (chosen == 1) {
    if (verdict.mistake) {
      hi_(j) = std::min(hi_(j), mid - epsilon_);
    } else {
      lo_(j) = std::max(lo_(j), mid - epsilon_);
    }
  } else {
    throw std::invalid_argument("adversary: chosen action out of range");
  }

  if (lo_(j) > hi_(j) + kDistributionTol ||
      theta_star_(j) < lo_(j) - kDistributionTol ||
      theta_star_(j) > hi_(j) + kDistributionTol) {
    throw ProtocolViolation("adversary: verdict inconsistent with hidden reward");
  }
}

Designer::Designer(Eigen::MatrixXd features) : features_(std::move(features)) {
  spread_ = spread(features_);
  if (spread_ == 0.0) {
    throw DegenerateFeatures("designer: feature matrix has zero spread");
  }
  BanditTask probe{features_, Eigen::VectorXd::Zero(dim())};
  probe.validate();
}

BanditTask Designer::next(const Eigen::VectorXd& center) const {
  if (center.size() != dim()) throw std::invalid_argument("designer: center dimension mismatch");
  return BanditTask{features_, -center};
}

double Designer::error_bound(double epsilon) const {
  const double k = static_cast<double>(num_actions());
  return epsilon * std::sqrt((k - 1.0) / 2.0) / spread_;
}

}  // namespace rirl
