#include "momentflow/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace momentflow {

std::uint64_t mix_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = 14695981039346656037ull ^ base;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {
template <typename MatT>
double condition_number(const MatT& m) {
  Eigen::JacobiSVD<MatT> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}
}  // namespace

Mat random_well_conditioned(Rng& rng, Index n, double max_cond) {
  while (true) {
    Mat g = rng.matrix(n, n);
    if (condition_number(g) < max_cond) return g;
  }
}

CMat random_well_conditioned_complex(Rng& rng, Index n, double max_cond) {
  while (true) {
    CMat g = rng.cmatrix(n, n);
    if (condition_number(g) < max_cond) return g;
  }
}

Mat random_orthogonal(Rng& rng, Index n) {
  const Mat a = rng.matrix(n, n);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

CMat random_unitary(Rng& rng, Index n) {
  const CMat a = rng.cmatrix(n, n);
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const double len = std::abs(r(i, i));
    if (len > 0.0) q.col(i) *= r(i, i) / len;
  }
  return q;
}

}  // namespace momentflow
