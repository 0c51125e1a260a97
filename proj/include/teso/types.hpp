#pragma once

#include <Eigen/Core>

namespace teso {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;

// The five local chart coordinates of the essential manifold.
using LocalCoordinates = Vec5;

// Relative rotation / translation of the right camera w.r.t. the left one,
// in the usual camera frame: x right, y down, z forward along the optical
// axis. A point X expressed in the left camera maps to R*X + t in the right.
using Rotation = Mat3;
using Translation = Vec3;

struct Pose {
  Rotation R = Rotation::Identity();
  Translation t = Translation::Zero();
};

// Pixel-space keypoint; the homogeneous third coordinate is implied 1.
struct Keypoint {
  double u = 0.0;
  double v = 0.0;
};

// Keypoint mapped through K^-1, third coordinate rescaled to 1.
struct NormalizedPoint {
  double x = 0.0;
  double y = 0.0;

  Vec3 hom() const { return Vec3(x, y, 1.0); }
};

struct CameraIntrinsics {
  double fx = 1.0;  // px
  double fy = 1.0;  // px
  double cx = 0.0;  // px
  double cy = 0.0;  // px
  double skew = 0.0;

  Mat3 matrix() const {
    Mat3 K;
    K << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return K;
  }
};

}  // namespace teso
