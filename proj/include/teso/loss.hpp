#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "teso/frame.hpp"
#include "teso/geometry.hpp"
#include "teso/types.hpp"

// The kernel-correlation epipolar loss and its exact first and second
// partial derivatives with respect to the five chart coordinates, evaluated
// at theta = 0 of the current state's chart. Two pair-list ablation modes
// share the machinery: a kernelized and a plain squared epipolar error over
// explicit one-to-one matches.

namespace teso::loss {

enum class LossMode {
  kKernelKnn,     // Gaussian kernel over both directed kNN sets
  kKernelPairs,   // Gaussian kernel over the one-to-one match list
  kSquaredPairs,  // sum of squared residuals over the match list
};

std::string to_string(LossMode mode);
LossMode loss_mode_from_string(const std::string& name);

struct KernelConfig {
  double sigma = 0.001;  // kernel bandwidth in normalized-coordinate units
  LossMode mode = LossMode::kKernelKnn;
};

struct LossEval {
  double value = 0.0;
  Vec5 grad = Vec5::Zero();
  Vec5 hess_diag = Vec5::Zero();
};

// Epipolar residual y^T * E * x.
double residual(const Mat3& E, const NormalizedPoint& x,
                const NormalizedPoint& y);

// Precomputes the frame's correspondence term list so repeated evaluations
// (tracking, finite-difference oracles, DE fitness calls) share the setup.
// Term order is fixed: all left-to-right kNN terms (left index ascending,
// neighbors in rank order), then all right-to-left terms; pair modes use the
// match list in order. Accumulation is compensated (Neumaier), so results do
// not depend on thread count or platform reassociation.
class Evaluator {
 public:
  // Validates the config and the frame. Throws std::invalid_argument when
  // sigma <= 0 or when the required correspondence data is missing on a
  // frame that has enough keypoints.
  Evaluator(const FrameObservation& frame, const KernelConfig& cfg);

  // Frames with fewer than 8 keypoints on either side carry too little
  // information; evaluate() returns nullopt for them and the tracker treats
  // that as a skip-frame.
  bool low_information() const { return low_information_; }

  std::size_t term_count() const { return xs_.size(); }

  // Loss value, gradient and Hessian diagonal at theta = 0 of the chart
  // centered on `state`.
  std::optional<LossEval> evaluate(const geometry::EssentialState& state) const;

  // Loss value only, for an arbitrary essential matrix (used by the global
  // solver and the finite-difference test oracles).
  double value_at(const Mat3& E) const;

 private:
  double sigma_ = 0.0;
  LossMode mode_ = LossMode::kKernelKnn;
  bool low_information_ = false;
  // Flattened term list: residual i is y_[i]^T * E * x_[i].
  std::vector<Vec3> xs_;
  std::vector<Vec3> ys_;
};

// One-shot convenience wrapper around Evaluator.
std::optional<LossEval> evaluate(const geometry::EssentialState& state,
                                 const FrameObservation& frame,
                                 const KernelConfig& cfg);

}  // namespace teso::loss
