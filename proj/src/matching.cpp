#include "teso/matching.hpp"

#include <stdexcept>

namespace teso::matching {

namespace {

// Top-k column/row scan keeping (similarity desc, index asc) order.
void top_k_scan(const Eigen::MatrixXd& S, bool by_row, int k,
                std::vector<std::vector<std::uint32_t>>& out) {
  const Eigen::Index n_query = by_row ? S.rows() : S.cols();
  const Eigen::Index n_cand = by_row ? S.cols() : S.rows();
  const int kk = static_cast<int>(std::min<Eigen::Index>(k, n_cand));
  out.assign(static_cast<std::size_t>(n_query), {});

  std::vector<double> best_sim(static_cast<std::size_t>(kk));
  std::vector<std::uint32_t> best_idx(static_cast<std::size_t>(kk));
  for (Eigen::Index q = 0; q < n_query; ++q) {
    int filled = 0;
    for (Eigen::Index c = 0; c < n_cand; ++c) {
      const double s = by_row ? S(q, c) : S(c, q);
      // Scanning in ascending index order, so a strict > keeps the lower
      // index on ties.
      int pos = filled;
      while (pos > 0 && s > best_sim[static_cast<std::size_t>(pos - 1)]) --pos;
      if (pos >= kk) continue;
      const int last = std::min(filled, kk - 1);
      for (int m = last; m > pos; --m) {
        best_sim[static_cast<std::size_t>(m)] =
            best_sim[static_cast<std::size_t>(m - 1)];
        best_idx[static_cast<std::size_t>(m)] =
            best_idx[static_cast<std::size_t>(m - 1)];
      }
      best_sim[static_cast<std::size_t>(pos)] = s;
      best_idx[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>(c);
      if (filled < kk) ++filled;
    }
    out[static_cast<std::size_t>(q)].assign(best_idx.begin(),
                                            best_idx.begin() + filled);
  }
}

}  // namespace

std::vector<NormalizedPoint> normalize(const std::vector<Keypoint>& points,
                                       const CameraIntrinsics& K) {
  if (!(K.fx > 0.0) || !(K.fy > 0.0)) {
    throw std::invalid_argument("normalize: focal lengths must be positive");
  }
  std::vector<NormalizedPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double y = (p.v - K.cy) / K.fy;
    const double x = (p.u - K.cx - K.skew * y) / K.fx;
    out.push_back({x, y});
  }
  return out;
}

CorrespondenceSet knn(const Eigen::MatrixXd& left_desc,
                      const Eigen::MatrixXd& right_desc, int k,
                      bool unit_normalize) {
  if (left_desc.cols() == 0 || right_desc.cols() == 0) {
    throw std::invalid_argument("knn: empty descriptor set");
  }
  if (left_desc.rows() != right_desc.rows()) {
    throw std::invalid_argument("knn: descriptor dimension mismatch");
  }
  if (k < 1) {
    throw std::invalid_argument("knn: k must be positive");
  }

  Eigen::MatrixXd S;
  if (unit_normalize) {
    Eigen::MatrixXd L = left_desc, R = right_desc;
    L.colwise().normalize();
    R.colwise().normalize();
    S.noalias() = L.transpose() * R;
  } else {
    S.noalias() = left_desc.transpose() * right_desc;
  }

  CorrespondenceSet out;
  out.k = k;
  top_k_scan(S, /*by_row=*/true, k, out.nn_right);
  top_k_scan(S, /*by_row=*/false, k, out.nn_left);
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> mutual_matches(
    const CorrespondenceSet& c) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t i = 0; i < c.nn_right.size(); ++i) {
    if (c.nn_right[i].empty()) continue;
    const std::uint32_t j = c.nn_right[i][0];
    if (j < c.nn_left.size() && !c.nn_left[j].empty() &&
        c.nn_left[j][0] == i) {
      out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace teso::matching
