#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include "momentflow/types.hpp"

namespace momentflow {

/// Index of the unordered pair (i, j), i < j, in lexicographic order.
inline Index pair_index(Index n, Index i, Index j) {
  // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

template <typename Scalar>
Eigen::VectorX<Scalar> basis_vec(Index n, Index k) {
  Eigen::VectorX<Scalar> v = Eigen::VectorX<Scalar>::Zero(n);
  v[k] = Scalar(1);
  return v;
}

/// Structure-constant tensor of a skew-symmetric bilinear map
/// mu(e_i, e_j) = sum_k c[i][j][k] e_k on R^n (or C^n).
///
/// Only slots with i < j are stored; access to (j, i) mirrors the sign, so
/// skew-symmetry and zero diagonal hold exactly by construction.
template <typename Scalar>
class BracketT {
public:
  BracketT() = default;

  explicit BracketT(Index n)
      : n_(n), a_(Eigen::VectorX<Scalar>::Zero(n * (n - 1) / 2 * n)) {
    if (n < 1) throw InputError("bracket dimension must be positive");
  }

  Index dim() const { return n_; }
  Index pair_count() const { return n_ * (n_ - 1) / 2; }

  /// Structure constant c[i][j][k] with mirrored access.
  Scalar c(Index i, Index j, Index k) const {
    if (i == j) return Scalar(0);
    if (i < j) return a_[pair_index(n_, i, j) * n_ + k];
    return -a_[pair_index(n_, j, i) * n_ + k];
  }

  /// Sets c[i][j][k]; requires i < j.
  void set(Index i, Index j, Index k, Scalar value) {
    if (!(0 <= i && i < j && j < n_ && 0 <= k && k < n_))
      throw InputError("bracket entry indices out of range (need 0 <= i < j < n, 0 <= k < n)");
    a_[pair_index(n_, i, j) * n_ + k] = value;
  }

  void add(Index i, Index j, Index k, Scalar value) {
    if (i == j) return;
    if (i < j)
      a_[pair_index(n_, i, j) * n_ + k] += value;
    else
      a_[pair_index(n_, j, i) * n_ + k] -= value;
  }

  /// mu(e_i, e_j) as a coefficient vector.
  Eigen::VectorX<Scalar> value(Index i, Index j) const {
    Eigen::VectorX<Scalar> v(n_);
    for (Index k = 0; k < n_; ++k) v[k] = c(i, j, k);
    return v;
  }

  /// mu(x, y) by bilinearity.
  Eigen::VectorX<Scalar> apply(const Eigen::VectorX<Scalar>& x,
                               const Eigen::VectorX<Scalar>& y) const {
    Eigen::VectorX<Scalar> out = Eigen::VectorX<Scalar>::Zero(n_);
    for (Index i = 0; i < n_; ++i)
      for (Index j = i + 1; j < n_; ++j) {
        const Scalar w = x[i] * y[j] - x[j] * y[i];
        if (w == Scalar(0)) continue;
        for (Index k = 0; k < n_; ++k) out[k] += w * a_[pair_index(n_, i, j) * n_ + k];
      }
    return out;
  }

  /// Matrix of ad(x) = mu(x, .) in the standard basis.
  Eigen::MatrixX<Scalar> ad(const Eigen::VectorX<Scalar>& x) const {
    Eigen::MatrixX<Scalar> m(n_, n_);
    for (Index j = 0; j < n_; ++j) {
      Eigen::VectorX<Scalar> ej = Eigen::VectorX<Scalar>::Zero(n_);
      ej[j] = Scalar(1);
      m.col(j) = apply(x, ej);
    }
    return m;
  }

  /// Norm squared under the inner product summing over all ordered pairs:
  /// |mu|^2 = sum_{i,j} |mu(e_i,e_j)|^2 = 2 * sum_{i<j} |mu(e_i,e_j)|^2.
  double norm_sq() const { return 2.0 * a_.squaredNorm(); }
  double norm() const { return std::sqrt(norm_sq()); }

  double sup_norm() const {
    double m = 0.0;
    for (Index t = 0; t < a_.size(); ++t) m = std::max(m, std::abs(a_[t]));
    return m;
  }

  bool is_zero(double tol = 0.0) const { return sup_norm() <= tol; }

  const Eigen::VectorX<Scalar>& coeffs() const { return a_; }
  Eigen::VectorX<Scalar>& coeffs() { return a_; }

  BracketT& operator*=(Scalar s) {
    a_ *= s;
    return *this;
  }
  friend BracketT operator*(Scalar s, BracketT b) {
    b *= s;
    return b;
  }
  friend BracketT operator-(BracketT x, const BracketT& y) {
    x.a_ -= y.a_;
    return x;
  }
  friend BracketT operator+(BracketT x, const BracketT& y) {
    x.a_ += y.a_;
    return x;
  }

private:
  Index n_ = 0;
  Eigen::VectorX<Scalar> a_;
};

using Bracket = BracketT<double>;
using ComplexBracket = BracketT<Complex>;

namespace detail {
template <typename Scalar>
struct MatrixOf {
  using type = Eigen::MatrixX<Scalar>;
};
}  // namespace detail

/// Transported tensor (g.mu)(x, y) = g mu(g^-1 x, g^-1 y).
/// Throws on singular g; warns to stderr when the condition number exceeds 1e8.
template <typename Scalar>
BracketT<Scalar> group_act(const Eigen::MatrixX<Scalar>& g, const BracketT<Scalar>& mu);

/// group_act without the conditioning checks; for integrator inner loops.
template <typename Scalar>
BracketT<Scalar> group_act_unchecked(const Eigen::MatrixX<Scalar>& g, const BracketT<Scalar>& mu);

/// Infinitesimal action (X.mu)(x, y) = X mu(x,y) - mu(Xx, y) - mu(x, Xy),
/// the derivative of t -> exp(tX).mu at t = 0.
template <typename Scalar>
BracketT<Scalar> infinitesimal_act(const Eigen::MatrixX<Scalar>& x, const BracketT<Scalar>& mu) {
  const Index n = mu.dim();
  if (x.rows() != n || x.cols() != n)
    throw InputError("infinitesimal_act: matrix size does not match bracket dimension");
  BracketT<Scalar> out(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      Eigen::VectorX<Scalar> v = x * mu.value(i, j);
      // -mu(Xe_i, e_j) - mu(e_i, Xe_j)
      for (Index a = 0; a < n; ++a) {
        if (x(a, i) != Scalar(0) && a != j) v -= x(a, i) * mu.value(a, j);
        if (x(a, j) != Scalar(0) && a != i) v -= x(a, j) * mu.value(i, a);
      }
      for (Index k = 0; k < n; ++k) out.set(i, j, k, v[k]);
    }
  return out;
}

/// Sup-norm of the Jacobi cyclic sum over basis triples; zero for Lie brackets.
template <typename Scalar>
double jacobi_defect(const BracketT<Scalar>& mu);

/// True when the lower central series reaches zero.
template <typename Scalar>
bool is_nilpotent(const BracketT<Scalar>& mu);

/// |X.mu| in the bracket norm; zero iff X is a derivation of mu.
template <typename Scalar>
double derivation_defect(const Eigen::MatrixX<Scalar>& x, const BracketT<Scalar>& mu) {
  return infinitesimal_act(x, mu).norm();
}

/// Packed coordinates of a real bracket: the stored i<j slots in order.
Vec to_vector(const Bracket& mu);
/// Packed coordinates of a complex bracket: [real slots; imaginary slots].
Vec to_vector(const ComplexBracket& mu);

Bracket bracket_from_vector(Index n, const Vec& v);
ComplexBracket complex_bracket_from_vector(Index n, const Vec& v);

/// Real tensor embedded with zero imaginary part.
ComplexBracket embed_complex(const Bracket& mu);

/// Realified multiplication by i: (re, im) -> (-im, re) on packed coordinates.
Vec times_i_realified(Index n, const Vec& v);

}  // namespace momentflow
