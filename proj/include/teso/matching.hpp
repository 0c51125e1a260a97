#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "teso/types.hpp"

// Keypoint normalization and brute-force descriptor matching. Exact
// maximum-inner-product search in both directions; n is at most ~1000 per
// frame, so an O(n^2) scan beats any index and stays deterministic.

namespace teso::matching {

// Tentative correspondences: for each left keypoint the k most similar right
// keypoints and vice versa, sorted by descending similarity, ties broken by
// lower index. Lists have min(k, opposite side size) entries.
struct CorrespondenceSet {
  int k = 0;
  std::vector<std::vector<std::uint32_t>> nn_right;  // per left keypoint
  std::vector<std::vector<std::uint32_t>> nn_left;   // per right keypoint
};

// K^-1 * (u, v, 1)^T rescaled to third coordinate 1.
std::vector<NormalizedPoint> normalize(const std::vector<Keypoint>& points,
                                       const CameraIntrinsics& K);

// Descriptors are the columns of each matrix (one column per keypoint);
// similarity is the raw inner product unless unit_normalize is set, in which
// case descriptors are scaled to unit norm first. Throws on empty sides or a
// descriptor dimension mismatch.
CorrespondenceSet knn(const Eigen::MatrixXd& left_desc,
                      const Eigen::MatrixXd& right_desc, int k,
                      bool unit_normalize = false);

// One-to-one matches (left, right) where each is the other's best neighbor;
// ordered by left index.
std::vector<std::pair<std::uint32_t, std::uint32_t>> mutual_matches(
    const CorrespondenceSet& c);

}  // namespace teso::matching
