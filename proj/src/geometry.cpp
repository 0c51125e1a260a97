#include "teso/geometry.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace teso::geometry {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerRad = 180.0 / kPi;
constexpr int kRenormPeriod = 100;

// Closest rotation to M in Frobenius norm (polar projection via SVD).
Mat3 project_to_rotation(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Mat3 U = svd.matrixU();
    U.col(2) *= -1.0;
    R = U * svd.matrixV().transpose();
  }
  return R;
}

}  // namespace

Mat3 sigma0() {
  Mat3 s = Mat3::Zero();
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  return s;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Rotation expm_skew(const Mat3& omega) {
  if ((omega + omega.transpose()).norm() > kOrthoTol) {
    throw std::invalid_argument("expm_skew: input is not skew-symmetric");
  }
  const Vec3 w(omega(2, 1), omega(0, 2), omega(1, 0));
  const double angle = w.norm();
  if (angle < 1e-8) {
    // sin(x)/x and (1-cos x)/x^2 degenerate; second-order series is exact to
    // double precision in this range.
    return Mat3::Identity() + omega + 0.5 * (omega * omega);
  }
  const double a = std::sin(angle) / angle;
  const double b = (1.0 - std::cos(angle)) / (angle * angle);
  return Mat3::Identity() + a * omega + b * (omega * omega);
}

Mat3 omega1(const LocalCoordinates& theta) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return inv_sqrt2 *
         skew(Vec3(theta[0], theta[1], theta[2] * inv_sqrt2));
}

Mat3 omega2(const LocalCoordinates& theta) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return inv_sqrt2 *
         skew(Vec3(theta[3], theta[4], -theta[2] * inv_sqrt2));
}

const Mat3& omega1_deriv(int i) {
  static const std::array<Mat3, 5> d = [] {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Mat3, 5> out;
    out[0] = s * skew(Vec3::UnitX());
    out[1] = s * skew(Vec3::UnitY());
    out[2] = 0.5 * skew(Vec3::UnitZ());
    out[3] = Mat3::Zero();
    out[4] = Mat3::Zero();
    return out;
  }();
  return d.at(static_cast<std::size_t>(i));
}

const Mat3& omega2_deriv(int i) {
  static const std::array<Mat3, 5> d = [] {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<Mat3, 5> out;
    out[0] = Mat3::Zero();
    out[1] = Mat3::Zero();
    out[2] = -0.5 * skew(Vec3::UnitZ());
    out[3] = s * skew(Vec3::UnitX());
    out[4] = s * skew(Vec3::UnitY());
    return out;
  }();
  return d.at(static_cast<std::size_t>(i));
}

Mat3 essential_from_rt(const Rotation& R, const Translation& t) {
  if (t.norm() <= 0.0) {
    throw std::invalid_argument("essential_from_rt: zero baseline");
  }
  return skew(t) * R;
}

bool is_rotation(const Mat3& R, double tol) {
  return (R.transpose() * R - Mat3::Identity()).norm() <= tol &&
         std::abs(R.determinant() - 1.0) <= tol;
}

Mat3 EssentialState::matrix() const { return U * sigma0() * V.transpose(); }

EssentialState essential_state_from_matrix(const Mat3& E) {
  Eigen::JacobiSVD<Mat3> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 s = svd.singularValues();
  if (!(s(0) > 0.0) || s(2) > 1e-6 * s(0) || s(1) <= 1e-6 * s(0)) {
    throw std::invalid_argument(
        "essential_state_from_matrix: matrix is not rank 2 (singular values " +
        std::to_string(s(0)) + ", " + std::to_string(s(1)) + ", " +
        std::to_string(s(2)) + ")");
  }
  EssentialState state;
  state.U = svd.matrixU();
  state.V = svd.matrixV();
  // Sigma0 zeroes the third columns, so flipping them moves the factors into
  // SO(3) without changing U * Sigma0 * V^T.
  if (state.U.determinant() < 0.0) state.U.col(2) *= -1.0;
  if (state.V.determinant() < 0.0) state.V.col(2) *= -1.0;
  return state;
}

EssentialState essential_state_from_pose(const Rotation& R,
                                         const Translation& t) {
  return essential_state_from_matrix(essential_from_rt(R, t));
}

Mat3 chart(const EssentialState& state, const LocalCoordinates& theta) {
  return state.U * expm_skew(omega1(theta)) * sigma0() *
         expm_skew(-omega2(theta)) * state.V.transpose();
}

EssentialState update(const EssentialState& state,
                      const LocalCoordinates& dtheta) {
  EssentialState next;
  next.U = state.U * expm_skew(omega1(dtheta));
  next.V = state.V * expm_skew(omega2(dtheta));
  next.updates_since_renorm = state.updates_since_renorm + 1;
  if (next.updates_since_renorm >= kRenormPeriod) {
    next.U = project_to_rotation(next.U);
    next.V = project_to_rotation(next.V);
    next.updates_since_renorm = 0;
  }
  return next;
}

std::pair<Rotation, Translation> recover_rt(
    const EssentialState& state,
    const std::vector<std::pair<NormalizedPoint, NormalizedPoint>>& inliers,
    const std::optional<Pose>& reference) {
  if (inliers.empty() && !reference.has_value()) {
    throw std::invalid_argument(
        "recover_rt: no correspondences and no reference pose");
  }

  Mat3 W;
  W << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  const Mat3 Ra = state.U * W * state.V.transpose();
  const Mat3 Rb = state.U * W.transpose() * state.V.transpose();
  const Vec3 u3 = state.U.col(2);

  const std::array<std::pair<Mat3, Vec3>, 4> candidates = {
      std::make_pair(Ra, u3), std::make_pair(Ra, Vec3(-u3)),
      std::make_pair(Rb, u3), std::make_pair(Rb, Vec3(-u3))};

  std::array<int, 4> votes = {0, 0, 0, 0};
  for (const auto& [xp, yp] : inliers) {
    const Vec3 x = xp.hom();
    const Vec3 y = yp.hom();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto& [R, t] = candidates[c];
      const Vec3 yRx = y.cross(R * x);
      const double denom = yRx.squaredNorm();
      if (denom < 1e-18) continue;  // point at the epipole, no vote
      const double z1 = -y.cross(t).dot(yRx) / denom;
      const double z2 = (R * (z1 * x) + t).z();
      if (z1 > 0.0 && z2 > 0.0) ++votes[c];
    }
  }

  int best = 0;
  for (int c = 1; c < 4; ++c) {
    if (votes[c] > votes[best]) {
      best = c;
      continue;
    }
    if (votes[c] == votes[best] && reference.has_value()) {
      const double ang_c =
          rotation_angle_deg(candidates[c].first * reference->R.transpose());
      const double ang_b = rotation_angle_deg(candidates[best].first *
                                              reference->R.transpose());
      if (ang_c < ang_b - 1e-12) {
        best = c;
      } else if (std::abs(ang_c - ang_b) <= 1e-12 &&
                 candidates[c].second.dot(reference->t) >
                     candidates[best].second.dot(reference->t)) {
        best = c;
      }
    }
  }
  return {candidates[best].first, candidates[best].second};
}

EulerAngles euler_intrinsic(const Rotation& R, EulerOrder order) {
  // R = R_i(a) * R_j(b) * R_k(c) for the intrinsic order (i, j, k);
  // b = asin(eps * R(i,k)), a = atan2(-eps*R(j,k), R(k,k)),
  // c = atan2(-eps*R(i,j), R(i,i)), with eps the permutation sign of (i,j,k).
  int i, j, k;
  switch (order) {
    case EulerOrder::XYZ: i = 0; j = 1; k = 2; break;
    case EulerOrder::XZY: i = 0; j = 2; k = 1; break;
    case EulerOrder::YXZ: i = 1; j = 0; k = 2; break;
    case EulerOrder::YZX: i = 1; j = 2; k = 0; break;
    case EulerOrder::ZXY: i = 2; j = 0; k = 1; break;
    case EulerOrder::ZYX: i = 2; j = 1; k = 0; break;
    default: throw std::invalid_argument("euler_intrinsic: bad order");
  }
  const double eps = ((j == (i + 1) % 3) ? 1.0 : -1.0);

  EulerAngles out;
  const double sin_b = std::clamp(eps * R(i, k), -1.0, 1.0);
  const double b = std::asin(sin_b);
  out.near_gimbal_lock = std::abs(sin_b) > 0.999999;  // |pitch| near 90 deg
  const double a = std::atan2(-eps * R(j, k), R(k, k));
  const double c = std::atan2(-eps * R(i, j), R(i, i));
  out.deg[i] = a * kDegPerRad;
  out.deg[j] = b * kDegPerRad;
  out.deg[k] = c * kDegPerRad;
  return out;
}

Vec3 rotation_error_axes(const Rotation& R_est, const Rotation& R_gt,
                         EulerOrder order) {
  return euler_intrinsic(R_est * R_gt.transpose(), order).deg;
}

double rotation_angle_deg(const Rotation& R) {
  const double c = std::clamp((R.trace() - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c) * kDegPerRad;
}

TranslationMetrics translation_metrics(const Translation& t_est_unit,
                                       const Translation& t_gt) {
  const double gt_norm = t_gt.norm();
  if (gt_norm <= 0.0) {
    throw std::invalid_argument("translation_metrics: zero-norm ground truth");
  }
  Vec3 t_est = t_est_unit;
  if (t_est.dot(t_gt) < 0.0) t_est = -t_est;

  TranslationMetrics out;
  out.abs_err_mm = (t_est * gt_norm - t_gt).cwiseAbs() * 1000.0;
  const double cos_angle =
      std::clamp(t_est.dot(t_gt) / (t_est.norm() * gt_norm), -1.0, 1.0);
  out.direction_angle_deg = std::acos(cos_angle) * kDegPerRad;
  return out;
}

}  // namespace teso::geometry
