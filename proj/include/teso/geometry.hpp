#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "teso/types.hpp"

// Essential-matrix geometry: the two-factor manifold parameterization, its
// local five-parameter chart, pose recovery and the rotation/translation
// error conventions used by the evaluation code.

namespace teso::geometry {

inline constexpr double kOrthoTol = 1e-9;

// Sigma0 = diag(1, 1, 0), the fixed core of every unit-scale essential matrix.
Mat3 sigma0();

// Cross-product matrix: skew(v) * w == v x w.
Mat3 skew(const Vec3& v);

// Rodrigues closed-form matrix exponential of a skew-symmetric matrix, with a
// series fallback below 1e-8 rotation angle. Throws std::invalid_argument if
// the input is not skew-symmetric within 1e-9.
Rotation expm_skew(const Mat3& omega);

// The two skew generators of the chart. omega1 depends on theta[0..2],
// omega2 on theta[2..4]; theta[2] enters both with opposite sign and an
// extra 1/sqrt(2).
Mat3 omega1(const LocalCoordinates& theta);
Mat3 omega2(const LocalCoordinates& theta);

// Constant partial derivatives d(omega1)/d(theta_i), d(omega2)/d(theta_i).
const Mat3& omega1_deriv(int i);
const Mat3& omega2_deriv(int i);

// E = [t]x * R. Singular values come out as (|t|, |t|, 0). Throws on |t| = 0.
Mat3 essential_from_rt(const Rotation& R, const Translation& t);

bool is_rotation(const Mat3& R, double tol = kOrthoTol);

// The tracked manifold point: a pair of orthogonal factors with determinant
// +1. The represented (unit-scale) essential matrix is U * Sigma0 * V^T.
struct EssentialState {
  Mat3 U = Mat3::Identity();
  Mat3 V = Mat3::Identity();
  // Update counter driving periodic re-orthonormalization; bookkeeping only.
  int updates_since_renorm = 0;

  Mat3 matrix() const;
};

// SVD-normalize an essential matrix into its factor pair. The scale and the
// sign conventions of SVD are absorbed here: singular values are dropped in
// favor of the implicit Sigma0 and both factors are flipped into det = +1.
// Throws std::invalid_argument unless the matrix has rank exactly 2 within
// tolerance (smallest singular value <= 1e-6 * largest, second one above it).
EssentialState essential_state_from_matrix(const Mat3& E);

EssentialState essential_state_from_pose(const Rotation& R,
                                         const Translation& t);

// Local chart around the state: E(theta) =
//   U * expm[omega1(theta)] * Sigma0 * expm[-omega2(theta)] * V^T.
Mat3 chart(const EssentialState& state, const LocalCoordinates& theta);

// Moves the chart center: U <- U*expm[omega1], V <- V*expm[omega2]. The new
// center represents exactly chart(state, dtheta). Factors are re-projected
// onto the rotation group every 100 updates to bound orthogonality drift.
EssentialState update(const EssentialState& state,
                      const LocalCoordinates& dtheta);

// Picks (R, t-direction) among the four algebraic decompositions of
// U*Sigma0*V^T by cheirality voting over the given normalized
// correspondences; ties are broken by smallest rotation angle to the
// reference pose, then by translation agreement with it. Throws when called
// with no correspondences and no reference.
std::pair<Rotation, Translation> recover_rt(
    const EssentialState& state,
    const std::vector<std::pair<NormalizedPoint, NormalizedPoint>>& inliers,
    const std::optional<Pose>& reference = std::nullopt);

// Intrinsic Tait-Bryan axis orders (rotations about successive body axes).
enum class EulerOrder { XYZ, XZY, YXZ, YZX, ZXY, ZYX };

struct EulerAngles {
  Vec3 deg = Vec3::Zero();  // angle about the X/Y/Z axis, in its slot
  bool near_gimbal_lock = false;
};

EulerAngles euler_intrinsic(const Rotation& R,
                            EulerOrder order = EulerOrder::XYZ);

// Per-axis rotation error in degrees: intrinsic Euler decomposition of
// R_est * R_gt^T. For small errors this agrees with the axis-angle vector to
// second order in any axis order.
Vec3 rotation_error_axes(const Rotation& R_est, const Rotation& R_gt,
                         EulerOrder order = EulerOrder::XYZ);

double rotation_angle_deg(const Rotation& R);

struct TranslationMetrics {
  // Componentwise |t_est * |t_gt| - t_gt| in mm, after flipping t_est so its
  // dot product with t_gt is nonnegative (E fixes t only up to sign).
  Vec3 abs_err_mm = Vec3::Zero();
  double direction_angle_deg = 0.0;
};

TranslationMetrics translation_metrics(const Translation& t_est_unit,
                                       const Translation& t_gt);

}  // namespace teso::geometry
