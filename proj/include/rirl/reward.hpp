#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rirl/rng.hpp"

namespace rirl {

inline constexpr double kEquivalenceTol = 1e-9;

/// The hidden cross-task reward vector. When s_ref is set the vector is
/// canonical, i.e. theta(s_ref) == 0 and the vector is the unique
/// representative of its constant-shift class.
struct ThetaVector {
  Eigen::VectorXd theta;
  std::optional<int> s_ref;
};

/// Per-task public reward; same length and indexing as the paired theta.
using TaskReward = Eigen::VectorXd;

/// Subtracts theta(s_ref) from every entry. Idempotent, and constant shifts
/// of the input collapse to the same output.
ThetaVector canonicalize(const ThetaVector& theta, int s_ref);

/// True iff a - b is within tol (inf-norm) of some constant vector, which is
/// exactly the condition for the two rewards to induce the same optimal
/// policy sets in every task.
bool behaviorally_equivalent(const ThetaVector& a, const ThetaVector& b,
                             double tol = kEquivalenceTol);

/// Entries i.i.d. Uniform[-1, 1]. With s_ref the vector is sampled directly
/// inside the canonical slice: off-reference entries uniform, theta(s_ref) = 0.
ThetaVector sample_theta(int dim, std::optional<int> s_ref, SplitMix64& rng);

}  // namespace rirl
