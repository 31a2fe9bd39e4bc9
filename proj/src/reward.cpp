#include "rirl/reward.hpp"

#include <stdexcept>

namespace rirl {

ThetaVector canonicalize(const ThetaVector& theta, int s_ref) {
  if (s_ref < 0 || s_ref >= theta.theta.size()) {
    throw std::invalid_argument("canonicalize: reference state out of range");
  }
  ThetaVector out;
  out.theta = theta.theta.array() - theta.theta(s_ref);
  out.theta(s_ref) = 0.0;
  out.s_ref = s_ref;
  return out;
}

bool behaviorally_equivalent(const ThetaVector& a, const ThetaVector& b, double tol) {
  if (a.theta.size() != b.theta.size()) {
    throw std::invalid_argument("behaviorally_equivalent: length mismatch");
  }
  const Eigen::VectorXd diff = a.theta - b.theta;
  // Best constant approximation in inf-norm is the midrange.
  return (diff.maxCoeff() - diff.minCoeff()) / 2.0 <= tol;
}

ThetaVector sample_theta(int dim, std::optional<int> s_ref, SplitMix64& rng) {
  if (dim < 1) throw std::invalid_argument("sample_theta: dim must be >= 1");
  ThetaVector out;
  out.theta.resize(dim);
  for (int i = 0; i < dim; ++i) out.theta(i) = rng.uniform(-1.0, 1.0);
  if (s_ref) {
    if (*s_ref < 0 || *s_ref >= dim) {
      throw std::invalid_argument("sample_theta: reference state out of range");
    }
    out.theta(*s_ref) = 0.0;
    out.s_ref = s_ref;
  }
  return out;
}

}  // namespace rirl
