#include "teso/frame.hpp"

namespace teso {

void prepare_frame(FrameObservation& frame, const CameraIntrinsics& K0,
                   const CameraIntrinsics& K1, int k,
                   bool unit_normalize_descriptors) {
  frame.left_norm = matching::normalize(frame.left_px, K0);
  frame.right_norm = matching::normalize(frame.right_px, K1);
  frame.knn = {};
  frame.matches.clear();
  if (frame.left_px.empty() || frame.right_px.empty()) return;
  frame.knn = matching::knn(frame.left_desc, frame.right_desc, k,
                            unit_normalize_descriptors);
  frame.matches = matching::mutual_matches(frame.knn);
}

}  // namespace teso
