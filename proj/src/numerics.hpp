#pragma once

// Internal rank helpers. Thresholds are relative to max(largest singular
// value, scale_floor); the floor keeps matrices that vanish in exact
// arithmetic from acquiring spurious rank when built from inexact inputs.

#include <Eigen/SVD>

#include "momentflow/types.hpp"

namespace momentflow::detail {

template <typename Scalar>
Index rank_with_floor(const Eigen::MatrixX<Scalar>& m, double scale_floor) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixX<Scalar>> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double thr = kRankRelTol * std::max(sv[0], scale_floor);
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > thr) ++rank;
  return rank;
}

template <typename Scalar>
Eigen::MatrixX<Scalar> column_span(const Eigen::MatrixX<Scalar>& cols, double scale_floor) {
  if (cols.cols() == 0) return Eigen::MatrixX<Scalar>(cols.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixX<Scalar>> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double thr = sv.size() == 0 ? 0.0 : kRankRelTol * std::max(sv[0], scale_floor);
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace momentflow::detail
