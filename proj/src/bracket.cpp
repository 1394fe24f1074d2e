#include "momentflow/bracket.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <iostream>

#include "numerics.hpp"

namespace momentflow {

namespace {

template <typename Scalar>
BracketT<Scalar> transport(const Eigen::MatrixX<Scalar>& g, const Eigen::MatrixX<Scalar>& ginv,
                           const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  BracketT<Scalar> out(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      // g mu(g^-1 e_i, g^-1 e_j), expanded over stored slots a < b.
      Eigen::VectorX<Scalar> v = Eigen::VectorX<Scalar>::Zero(n);
      for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b) {
          const Scalar w = ginv(a, i) * ginv(b, j) - ginv(b, i) * ginv(a, j);
          if (w == Scalar(0)) continue;
          v += w * mu.value(a, b);
        }
      v = (g * v).eval();
      for (Index k = 0; k < n; ++k) out.set(i, j, k, v[k]);
    }
  return out;
}

}  // namespace

template <typename Scalar>
BracketT<Scalar> group_act(const Eigen::MatrixX<Scalar>& g, const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  if (g.rows() != n || g.cols() != n)
    throw InputError("group_act: matrix size does not match bracket dimension");

  Eigen::JacobiSVD<Eigen::MatrixX<Scalar>> svd(g);
  const auto& sv = svd.singularValues();
  if (sv[n - 1] <= 0.0 || !(sv[0] / sv[n - 1] < 1e14))
    throw InputError("group_act: singular transformation");
  if (sv[0] / sv[n - 1] > 1e8)
    std::cerr << "momentflow: warning: group element condition number "
              << sv[0] / sv[n - 1] << " exceeds 1e8\n";

  return transport<Scalar>(g, g.inverse(), mu);
}

template <typename Scalar>
BracketT<Scalar> group_act_unchecked(const Eigen::MatrixX<Scalar>& g, const BracketT<Scalar>& mu) {
  if (g.rows() != mu.dim() || g.cols() != mu.dim())
    throw InputError("group_act: matrix size does not match bracket dimension");
  return transport<Scalar>(g, g.partialPivLu().inverse(), mu);
}

template <typename Scalar>
double jacobi_defect(const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  double defect = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) {
        const Eigen::VectorX<Scalar> cyc = mu.apply(mu.value(i, j), basis_vec<Scalar>(n, k)) +
                                           mu.apply(mu.value(j, k), basis_vec<Scalar>(n, i)) +
                                           mu.apply(mu.value(k, i), basis_vec<Scalar>(n, j));
        for (Index t = 0; t < n; ++t) defect = std::max(defect, std::abs(cyc[t]));
      }
  return defect;
}

template <typename Scalar>
bool is_nilpotent(const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  const double scale = mu.sup_norm();
  // Lower central series: W_1 = span(e_1..e_n), W_{k+1} = mu(R^n, W_k).
  Eigen::MatrixX<Scalar> w = Eigen::MatrixX<Scalar>::Identity(n, n);
  Index prev = n;
  while (true) {
    Eigen::MatrixX<Scalar> cols(n, n * w.cols());
    for (Index i = 0; i < n; ++i)
      for (Index c = 0; c < w.cols(); ++c)
        cols.col(i * w.cols() + c) = mu.apply(basis_vec<Scalar>(n, i), w.col(c).eval());
    w = detail::column_span<Scalar>(cols, scale);
    if (w.cols() == 0) return true;
    if (w.cols() >= prev) return false;
    prev = w.cols();
  }
}

// Explicit instantiations for the real and complex scalar types.
template BracketT<double> group_act<double>(const Mat&, const BracketT<double>&);
template BracketT<Complex> group_act<Complex>(const CMat&, const BracketT<Complex>&);
template BracketT<double> group_act_unchecked<double>(const Mat&, const BracketT<double>&);
template BracketT<Complex> group_act_unchecked<Complex>(const CMat&, const BracketT<Complex>&);
template double jacobi_defect<double>(const BracketT<double>&);
template double jacobi_defect<Complex>(const BracketT<Complex>&);
template bool is_nilpotent<double>(const BracketT<double>&);
template bool is_nilpotent<Complex>(const BracketT<Complex>&);

Vec to_vector(const Bracket& mu) { return mu.coeffs(); }

Vec to_vector(const ComplexBracket& mu) {
  const auto& a = mu.coeffs();
  Vec v(2 * a.size());
  v.head(a.size()) = a.real();
  v.tail(a.size()) = a.imag();
  return v;
}

Bracket bracket_from_vector(Index n, const Vec& v) {
  Bracket mu(n);
  if (v.size() != mu.coeffs().size())
    throw InputError("bracket_from_vector: wrong coordinate count");
  mu.coeffs() = v;
  return mu;
}

ComplexBracket complex_bracket_from_vector(Index n, const Vec& v) {
  ComplexBracket mu(n);
  const Index p = mu.coeffs().size();
  if (v.size() != 2 * p)
    throw InputError("complex_bracket_from_vector: wrong coordinate count");
  mu.coeffs().real() = v.head(p);
  mu.coeffs().imag() = v.tail(p);
  return mu;
}

ComplexBracket embed_complex(const Bracket& mu) {
  ComplexBracket out(mu.dim());
  out.coeffs().real() = mu.coeffs();
  out.coeffs().imag().setZero();
  return out;
}

Vec times_i_realified(Index n, const Vec& v) {
  const Index p = n * (n - 1) / 2 * n;
  if (v.size() != 2 * p) throw InputError("times_i_realified: wrong coordinate count");
  Vec out(2 * p);
  out.head(p) = -v.tail(p);
  out.tail(p) = v.head(p);
  return out;
}

}  // namespace momentflow
