#include "momentflow/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

#include "numerics.hpp"

namespace momentflow {

namespace {

/// Columns mu(x_a, w_b) over bases of two subspaces.
template <typename Scalar>
Eigen::MatrixX<Scalar> bracket_columns(const BracketT<Scalar>& mu,
                                       const Eigen::MatrixX<Scalar>& lhs,
                                       const Eigen::MatrixX<Scalar>& rhs) {
  const Index n = mu.dim();
  Eigen::MatrixX<Scalar> cols(n, lhs.cols() * rhs.cols());
  for (Index a = 0; a < lhs.cols(); ++a)
    for (Index b = 0; b < rhs.cols(); ++b)
      cols.col(a * rhs.cols() + b) = mu.apply(lhs.col(a).eval(), rhs.col(b).eval());
  return cols;
}

template <typename Scalar>
std::vector<int> series_dims(const BracketT<Scalar>& mu, bool derived) {
  const Index n = mu.dim();
  const double scale = mu.sup_norm();
  Eigen::MatrixX<Scalar> full = Eigen::MatrixX<Scalar>::Identity(n, n);
  Eigen::MatrixX<Scalar> w = full;
  std::vector<int> dims{static_cast<int>(n)};
  while (true) {
    const auto cols = derived ? bracket_columns(mu, w, w) : bracket_columns(mu, full, w);
    w = detail::column_span<Scalar>(cols, scale);
    const int d = static_cast<int>(w.cols());
    dims.push_back(d);
    if (d == 0 || d >= dims[dims.size() - 2]) break;
  }
  return dims;
}

template <typename Scalar>
int center_dimension(const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  // Stack of ad(e_i) rows: x is central iff mu(x, e_j) = 0 for all j.
  Eigen::MatrixX<Scalar> big(n * n, n);
  for (Index i = 0; i < n; ++i) {
    const Eigen::MatrixX<Scalar> adi = mu.ad(basis_vec<Scalar>(n, i));
    big.block(i * n, 0, n, n) = adi;
  }
  return static_cast<int>(n - detail::rank_with_floor<Scalar>(big, mu.sup_norm()));
}

template <typename Scalar>
int derivation_dimension(const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  const Index p = mu.coeffs().size();
  Eigen::MatrixX<Scalar> contraction(p, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      Eigen::MatrixX<Scalar> e = Eigen::MatrixX<Scalar>::Zero(n, n);
      e(a, b) = Scalar(1);
      contraction.col(a * n + b) = infinitesimal_act<Scalar>(e, mu).coeffs();
    }
  return static_cast<int>(n * n - detail::rank_with_floor<Scalar>(contraction, mu.sup_norm()));
}

template <typename Scalar>
Eigen::MatrixX<Scalar> killing_matrix(const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  std::vector<Eigen::MatrixX<Scalar>> ads(n);
  for (Index i = 0; i < n; ++i) ads[i] = mu.ad(basis_vec<Scalar>(n, i));
  Eigen::MatrixX<Scalar> k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) k(i, j) = k(j, i) = (ads[i] * ads[j]).trace();
  return k;
}

std::array<int, 3> killing_signature_real(const Bracket& mu) {
  const Index n = mu.dim();
  const Mat k = killing_matrix<double>(mu);
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const Vec ev = es.eigenvalues();
  // Absolute floor at the natural Killing scale, so forms that vanish in
  // exact arithmetic classify as zero when computed from inexact inputs.
  const double sup = mu.sup_norm();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), double(n) * sup * sup);
  const double thr = kRankRelTol * scale;
  std::array<int, 3> sig{0, 0, 0};
  for (Index i = 0; i < n; ++i) {
    if (ev[i] > thr)
      ++sig[0];
    else if (ev[i] < -thr)
      ++sig[1];
    else
      ++sig[2];
  }
  return sig;
}

std::array<int, 3> killing_signature_complex(const ComplexBracket& mu) {
  // Over C only rank and nullity are invariant.
  const Index n = mu.dim();
  const CMat k = killing_matrix<Complex>(mu);
  Eigen::JacobiSVD<CMat> svd(k);
  const auto& sv = svd.singularValues();
  const double sup = mu.sup_norm();
  const double scale = std::max(sv.size() ? sv[0] : 0.0, double(n) * sup * sup);
  const double thr = kRankRelTol * scale;
  int rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thr) ++rank;
  return {rank, 0, static_cast<int>(n) - rank};
}

template <typename Scalar>
AlgebraInvariants invariants_impl(const BracketT<Scalar>& mu, double jacobi_tol) {
  AlgebraInvariants inv;
  inv.jacobi_defect = jacobi_defect(mu);
  if (!(inv.jacobi_defect < jacobi_tol))
    throw InputError("invariants: tensor is not a Lie bracket (jacobi defect " +
                     std::to_string(inv.jacobi_defect) + ")");
  inv.lower_central_dims = series_dims(mu, /*derived=*/false);
  inv.derived_dims = series_dims(mu, /*derived=*/true);
  inv.nilpotent = inv.lower_central_dims.back() == 0;
  inv.center_dim = center_dimension(mu);
  inv.derivation_dim = derivation_dimension(mu);
  if constexpr (std::is_same_v<Scalar, double>)
    inv.killing_signature = killing_signature_real(mu);
  else
    inv.killing_signature = killing_signature_complex(mu);
  return inv;
}

}  // namespace

AlgebraInvariants invariants(const Bracket& mu, double jacobi_tol) {
  return invariants_impl<double>(mu, jacobi_tol);
}

AlgebraInvariants invariants(const ComplexBracket& mu, double jacobi_tol) {
  return invariants_impl<Complex>(mu, jacobi_tol);
}

bool invariants_equal(const AlgebraInvariants& a, const AlgebraInvariants& b) {
  return a.lower_central_dims == b.lower_central_dims && a.derived_dims == b.derived_dims &&
         a.center_dim == b.center_dim && a.derivation_dim == b.derivation_dim &&
         a.killing_signature == b.killing_signature && a.nilpotent == b.nilpotent;
}

}  // namespace momentflow
