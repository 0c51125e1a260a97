#include "teso/loss.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace teso::loss {

namespace {

// Neumaier compensated summation; deterministic for a fixed term order.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double get() const { return sum + comp; }
};

// Constant sandwich matrices of the chart derivatives at theta = 0:
//   dE/dtheta_i   = U * A[i] * V^T
//   d2E/dtheta_i2 = U * B[i] * V^T
struct ChartDerivs {
  std::array<Mat3, 5> A;
  std::array<Mat3, 5> B;
};

const ChartDerivs& chart_derivs() {
  static const ChartDerivs d = [] {
    ChartDerivs out;
    const Mat3 S0 = geometry::sigma0();
    for (int i = 0; i < 5; ++i) {
      const Mat3& D1 = geometry::omega1_deriv(i);
      const Mat3& D2 = geometry::omega2_deriv(i);
      out.A[static_cast<std::size_t>(i)] = D1 * S0 - S0 * D2;
      out.B[static_cast<std::size_t>(i)] =
          D1 * D1 * S0 - 2.0 * (D1 * S0 * D2) + S0 * (D2 * D2);
    }
    return out;
  }();
  return d;
}

constexpr std::size_t kMinKeypoints = 8;

}  // namespace

std::string to_string(LossMode mode) {
  switch (mode) {
    case LossMode::kKernelKnn: return "kernel-knn";
    case LossMode::kKernelPairs: return "kernel-pairs";
    case LossMode::kSquaredPairs: return "squared-pairs";
  }
  return "unknown";
}

LossMode loss_mode_from_string(const std::string& name) {
  if (name == "kernel-knn") return LossMode::kKernelKnn;
  if (name == "kernel-pairs") return LossMode::kKernelPairs;
  if (name == "squared-pairs") return LossMode::kSquaredPairs;
  throw std::invalid_argument("unknown loss mode: " + name);
}

double residual(const Mat3& E, const NormalizedPoint& x,
                const NormalizedPoint& y) {
  return y.hom().dot(E * x.hom());
}

Evaluator::Evaluator(const FrameObservation& frame, const KernelConfig& cfg)
    : sigma_(cfg.sigma), mode_(cfg.mode) {
  if (!(cfg.sigma > 0.0)) {
    throw std::invalid_argument("loss: sigma must be positive");
  }
  if (frame.left_norm.size() != frame.left_px.size() ||
      frame.right_norm.size() != frame.right_px.size()) {
    throw std::invalid_argument("loss: frame has not been prepared");
  }

  const std::size_t n_left = frame.left_norm.size();
  const std::size_t n_right = frame.right_norm.size();
  if (n_left < kMinKeypoints || n_right < kMinKeypoints) {
    low_information_ = true;
    return;
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> terms;
  if (mode_ == LossMode::kKernelKnn) {
    if (frame.knn.k == 0 || frame.knn.nn_right.size() != n_left ||
        frame.knn.nn_left.size() != n_right) {
      throw std::invalid_argument("loss: missing kNN correspondence sets");
    }
    for (std::uint32_t i = 0; i < n_left; ++i) {
      for (const std::uint32_t j : frame.knn.nn_right[i]) {
        terms.emplace_back(i, j);
      }
    }
    for (std::uint32_t j = 0; j < n_right; ++j) {
      for (const std::uint32_t i : frame.knn.nn_left[j]) {
        terms.emplace_back(i, j);
      }
    }
  } else {
    if (frame.matches.empty()) {
      throw std::invalid_argument("loss: missing one-to-one match list");
    }
    terms = frame.matches;
  }

  xs_.reserve(terms.size());
  ys_.reserve(terms.size());
  for (const auto& [i, j] : terms) {
    xs_.push_back(frame.left_norm[i].hom());
    ys_.push_back(frame.right_norm[j].hom());
  }
}

std::optional<LossEval> Evaluator::evaluate(
    const geometry::EssentialState& state) const {
  if (low_information_) return std::nullopt;

  const ChartDerivs& cd = chart_derivs();
  const Mat3 E = state.matrix();
  std::array<Mat3, 5> Ea, Eb;
  for (std::size_t i = 0; i < 5; ++i) {
    Ea[i] = state.U * cd.A[i] * state.V.transpose();
    Eb[i] = state.U * cd.B[i] * state.V.transpose();
  }

  const double inv_s2 = 1.0 / (sigma_ * sigma_);
  Accumulator value;
  std::array<Accumulator, 5> grad, hess;

  for (std::size_t t = 0; t < xs_.size(); ++t) {
    const Vec3& x = xs_[t];
    const Vec3& y = ys_[t];
    const Vec3 Ex = E * x;
    const double r = y.dot(Ex);

    if (mode_ == LossMode::kSquaredPairs) {
      value.add(r * r);
      for (std::size_t i = 0; i < 5; ++i) {
        const double r1 = y.dot(Ea[i] * x);
        const double r2 = y.dot(Eb[i] * x);
        grad[i].add(2.0 * r * r1);
        hess[i].add(2.0 * (r1 * r1 + r * r2));
      }
    } else {
      const double w = std::exp(-0.5 * r * r * inv_s2);
      value.add(-w);
      const double c = w * inv_s2;
      for (std::size_t i = 0; i < 5; ++i) {
        const double r1 = y.dot(Ea[i] * x);
        const double r2 = y.dot(Eb[i] * x);
        grad[i].add(c * (r * r1));
        hess[i].add(c * (r1 * r1 + r * r2 - r * r * r1 * r1 * inv_s2));
      }
    }
  }

  LossEval out;
  out.value = value.get();
  for (std::size_t i = 0; i < 5; ++i) {
    out.grad[static_cast<Eigen::Index>(i)] = grad[i].get();
    out.hess_diag[static_cast<Eigen::Index>(i)] = hess[i].get();
  }
  return out;
}

double Evaluator::value_at(const Mat3& E) const {
  const double inv_s2 = 1.0 / (sigma_ * sigma_);
  Accumulator value;
  for (std::size_t t = 0; t < xs_.size(); ++t) {
    const double r = ys_[t].dot(E * xs_[t]);
    if (mode_ == LossMode::kSquaredPairs) {
      value.add(r * r);
    } else {
      value.add(-std::exp(-0.5 * r * r * inv_s2));
    }
  }
  return value.get();
}

std::optional<LossEval> evaluate(const geometry::EssentialState& state,
                                 const FrameObservation& frame,
                                 const KernelConfig& cfg) {
  return Evaluator(frame, cfg).evaluate(state);
}

}  // namespace teso::loss
