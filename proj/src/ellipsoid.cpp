#include "rirl/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "rirl/errors.hpp"

namespace rirl {

namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& shape, const char* where) {
  Eigen::LLT<Eigen::MatrixXd> llt(shape);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure(std::string(where) + ": shape matrix is not positive definite");
  }
  return llt;
}

double log_det_spd(const Eigen::MatrixXd& shape, const char* where) {
  const Eigen::LLT<Eigen::MatrixXd> llt = factorize(shape, where);
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

EllipsoidState make_ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape) {
  if (center.size() < 2 || shape.rows() != center.size() || shape.cols() != center.size()) {
    throw std::invalid_argument("make_ellipsoid: bad dimensions");
  }
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw std::invalid_argument("make_ellipsoid: shape matrix is not symmetric");
  }
  factorize(shape, "make_ellipsoid");
  return EllipsoidState{std::move(center), std::move(shape), 0.0};
}

EllipsoidState init_box(int dim) {
  if (dim < 2) throw std::invalid_argument("init_box: dimension must be >= 2");
  EllipsoidState e;
  e.center = Eigen::VectorXd::Zero(dim);
  e.shape = static_cast<double>(dim) * Eigen::MatrixXd::Identity(dim, dim);
  e.log_volume_offset = 0.0;
  return e;
}

double unit_ball_log_volume(int dim) {
  const double d = static_cast<double>(dim);
  return 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
}

double log_volume(const EllipsoidState& e) {
  return unit_ball_log_volume(e.dim()) + 0.5 * log_det_spd(e.shape, "log_volume");
}

double central_cut_log_volume_drop(int dim) {
  const double d = static_cast<double>(dim);
  return 0.5 * (std::log((d + 1.0) / (d - 1.0)) - d * std::log(d * d / (d * d - 1.0)));
}

bool is_degenerate_cut(const EllipsoidState& e, const Eigen::VectorXd& direction) {
  const double gnorm = direction.norm();
  if (!(gnorm > 0.0) || !direction.allFinite()) return true;
  const double gqg = direction.dot(e.shape * direction);
  const double scale = e.shape.diagonal().maxCoeff();
  return !(gqg > kCutDegeneracyFloor * kCutDegeneracyFloor * gnorm * gnorm * scale);
}

EllipsoidState central_cut(const EllipsoidState& e, const Eigen::VectorXd& direction) {
  if (direction.size() != e.dim()) {
    throw std::invalid_argument("central_cut: direction has wrong length");
  }
  if (is_degenerate_cut(e, direction)) {
    throw DegenerateCut("central_cut: direction below degeneracy floor");
  }
  const double d = static_cast<double>(e.dim());
  const Eigen::VectorXd qg = e.shape * direction;
  const double gqg = direction.dot(qg);
  const Eigen::VectorXd b = qg / std::sqrt(gqg);

  EllipsoidState out;
  out.center = e.center + b / (d + 1.0);
  out.shape = (d * d / (d * d - 1.0)) * (e.shape - (2.0 / (d + 1.0)) * (b * b.transpose()));
  out.shape = 0.5 * (out.shape + out.shape.transpose()).eval();
  const double drop = 0.5 * (log_det_spd(out.shape, "central_cut") -
                             log_det_spd(e.shape, "central_cut"));
  out.log_volume_offset = e.log_volume_offset + drop;
  return out;
}

bool contains(const EllipsoidState& e, const Eigen::VectorXd& theta) {
  if (theta.size() != e.dim()) throw std::invalid_argument("contains: dimension mismatch");
  const Eigen::LLT<Eigen::MatrixXd> llt = factorize(e.shape, "contains");
  const Eigen::VectorXd diff = theta - e.center;
  return diff.dot(llt.solve(diff)) <= 1.0 + kContainmentTol;
}

ClampResult clamp_center(const EllipsoidState& e, double epsilon) {
  const int dim = e.dim();
  const int cap =
      static_cast<int>(std::ceil(10.0 * dim * std::log(1.0 / std::min(epsilon, 0.5))));
  ClampResult result;
  result.state = e;
  while (result.state.center.lpNorm<Eigen::Infinity>() > 1.0) {
    if (static_cast<int>(result.cuts.size()) >= cap) {
      throw NumericalFailure("clamp_center: cut cap exceeded");
    }
    int worst = 0;
    result.state.center.cwiseAbs().maxCoeff(&worst);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    g(worst) = result.state.center(worst) > 0.0 ? -1.0 : 1.0;
    result.state = central_cut(result.state, g);
    result.cuts.push_back({std::move(g), result.state.center, log_volume(result.state)});
  }
  return result;
}

}  // namespace rirl
