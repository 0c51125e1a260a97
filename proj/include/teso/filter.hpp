#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "teso/geometry.hpp"
#include "teso/loss.hpp"
#include "teso/types.hpp"

// The adaptive online stochastic optimizer: per-coordinate exponential moving
// averages of the gradient, its square and the Hessian diagonal, an adaptive
// memory that sets the averaging horizon, and the resulting per-coordinate
// learning rate. Together with the two manifold factors the persistent model
// is exactly 38 scalars.

namespace teso::filter {

struct FilterState {
  Vec5 g = Vec5::Zero();  // EMA of gradients
  Vec5 v = Vec5::Zero();  // EMA of squared gradients
  Vec5 h = Vec5::Zero();  // EMA of Hessian diagonals
  Vec5 m = Vec5::Ones();  // adaptive memory sizes, >= 1
  std::int64_t frame_count = 0;
  int burn_in = 10;
  double epsilon = 1e-7;
};

// g, v, h, m plus the two 3x3 manifold factors.
inline constexpr int kPersistentScalars = 4 * 5 + 2 * 9;
static_assert(kPersistentScalars == 38);

// The EMA Hessian diagonal of the nonconvex kernel loss can be negative or
// tiny near inflection points; steps divide by max(|h|, kHessFloor) so the
// direction stays along -grad with a bounded magnitude.
inline constexpr double kHessFloor = 1e-6;
// Per-coordinate step clamp, keeps the chart in its valid neighborhood.
inline constexpr double kStepClamp = 0.01;

struct StepResult {
  LocalCoordinates dtheta = LocalCoordinates::Zero();
  Vec5 nu = Vec5::Zero();  // effective learning rates, in [0, 1]
  bool applied = false;
};

// One EMA update with per-coordinate rate 1/m_i. Pure; does not touch m.
FilterState ema_update(const FilterState& state, const Vec5& grad,
                       const Vec5& hess_diag);

// m_i <- (1 - g_i^2/(v_i + eps)) * m_i + 1, coefficient clamped to [0, 1]
// against floating-point overshoot, so m >= 1 always holds.
FilterState memory_update(const FilterState& state);

// dtheta_i = -nu_i * grad_i / max(|h_i|, kHessFloor) with
// nu_i = g_i^2/(v_i + eps) clamped to [0, 1]; grad is the current frame's
// instantaneous gradient. Components are clamped to +-kStepClamp.
StepResult step(const FilterState& state, const Vec5& grad);

struct TickResult {
  FilterState filter;
  geometry::EssentialState manifold;
  StepResult step;
};

// One frame of tracking. Skip-frames (nullopt eval) advance frame_count
// only. During the burn-in window (the first `burn_in` frames) statistics
// accumulate with m growing by one per frame and the manifold stays fixed;
// afterwards each frame runs ema_update, memory_update, step and the
// manifold update.
TickResult tick(const FilterState& filter,
                const geometry::EssentialState& manifold,
                const std::optional<loss::LossEval>& eval);

// Checkpoint: the 38 persistent scalars plus frame_count and a config hash.
//
// Binary layout (little-endian):
//   byte 0..7   magic "TESOCKPT"
//   byte 8..9   version  (u16, currently 1)
//   byte 10..11 reserved (u16, zero)
//   byte 12..19 config hash (u64)
//   byte 20..27 frame_count (i64)
//   byte 28..   38 float64: g[5], v[5], h[5], m[5], U row-major[9],
//               V row-major[9]
// The text form stores the same fields as key=value lines.
struct Checkpoint {
  FilterState filter;
  geometry::EssentialState manifold;
  std::uint64_t config_hash = 0;
};

void save_checkpoint_binary(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint_binary(const std::string& path);
void save_checkpoint_text(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint_text(const std::string& path);

}  // namespace teso::filter
