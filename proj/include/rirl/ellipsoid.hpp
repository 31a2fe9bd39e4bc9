#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rirl {

inline constexpr double kCutDegeneracyFloor = 1e-12;
inline constexpr double kContainmentTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-10;

/// Uncertainty set {theta : (theta - center)' shape^-1 (theta - center) <= 1}.
/// Values are immutable; every update returns a fresh state.
struct EllipsoidState {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // symmetric positive definite
  /// Running log-volume relative to the initial ellipsoid of a run.
  double log_volume_offset = 0.0;

  int dim() const { return static_cast<int>(center.size()); }
};

/// Validated construction from an arbitrary center and SPD shape matrix.
/// Throws on asymmetry or a failed Cholesky factorization.
EllipsoidState make_ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

/// Minimum-volume ellipsoid enclosing the box [-1, 1]^d: center 0, shape d*I.
/// d = 1 is rejected (the cut update divides by d^2 - 1); callers keep a
/// plain interval for that case.
EllipsoidState init_box(int dim);

/// log C_d, the log-volume of the unit l2 ball in dimension d.
double unit_ball_log_volume(int dim);

/// log(C_d sqrt(det shape)).
double log_volume(const EllipsoidState& e);

/// Exact log-volume decrease of one central cut in dimension d; always at
/// least 1 / (2 (d + 1)).
double central_cut_log_volume_drop(int dim);

/// True when the cut direction is too small, relative to the ellipsoid
/// scale, to carry information.
bool is_degenerate_cut(const EllipsoidState& e, const Eigen::VectorXd& direction);

/// Minimum-volume ellipsoid enclosing the half {theta in E : g . (theta - c) >= 0},
/// via the rank-one update
///   b  = Q g / sqrt(g' Q g)
///   c' = c + b / (d + 1)
///   Q' = d^2 / (d^2 - 1) (Q - 2 / (d + 1) b b')
/// with Q' re-symmetrized. Throws DegenerateCut below the degeneracy floor and
/// NumericalFailure if Q' loses positive definiteness.
EllipsoidState central_cut(const EllipsoidState& e, const Eigen::VectorXd& direction);

/// (theta - c)' Q^-1 (theta - c) <= 1 + 1e-9, evaluated through a Cholesky solve.
bool contains(const EllipsoidState& e, const Eigen::VectorXd& theta);

struct ClampCutRecord {
  Eigen::VectorXd direction;
  Eigen::VectorXd center_after;
  double log_volume_after = 0.0;
};

struct ClampResult {
  EllipsoidState state;
  std::vector<ClampCutRecord> cuts;
};

/// Repeatedly cuts along the worst coordinate axis until the center lies in
/// [-1, 1]^d. Each cut keeps the side containing the box, so no point of
/// [-1, 1]^d already inside the ellipsoid is lost. The iteration cap is
/// ceil(10 d log(1 / epsilon)); exceeding it throws NumericalFailure.
ClampResult clamp_center(const EllipsoidState& e, double epsilon = 1e-9);

}  // namespace rirl
