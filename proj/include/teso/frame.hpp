#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "teso/matching.hpp"
#include "teso/types.hpp"

namespace teso {

// One stereo frame as seen by the tracker. The pixel keypoints, descriptors
// and ground-truth fields come from the simulator or a feature file; the
// normalized points and tentative correspondences are filled by
// prepare_frame() before the loss consumes the frame.
struct FrameObservation {
  std::vector<Keypoint> left_px;
  std::vector<Keypoint> right_px;
  // One column per keypoint; rows = descriptor dimension.
  Eigen::MatrixXd left_desc;
  Eigen::MatrixXd right_desc;

  // Right camera relative to left, when known.
  std::optional<Pose> gt_pose;
  // True (left, right) index pairing of inlier keypoints, when known.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> gt_pairs;

  // Derived data.
  std::vector<NormalizedPoint> left_norm;
  std::vector<NormalizedPoint> right_norm;
  matching::CorrespondenceSet knn;
  // One-to-one mutual best matches, consumed by the pair-list loss modes.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> matches;
};

// Normalizes keypoints through the camera matrices and builds the kNN
// correspondence sets plus the mutual match list.
void prepare_frame(FrameObservation& frame, const CameraIntrinsics& K0,
                   const CameraIntrinsics& K1, int k,
                   bool unit_normalize_descriptors = false);

}  // namespace teso
