#pragma once

#include <functional>
#include <vector>

#include "momentflow/types.hpp"

namespace momentflow {

enum class GroupTag { GL_real, SL_real, GL_complex_realified };

const char* to_string(GroupTag tag);

/// A linear reductive action packaged for the moment-map machinery.
///
/// Vectors of V are real coordinate vectors (complex representations are
/// realified). Lie algebra elements are n x n matrices, stored complex; the
/// real models carry zero imaginary parts. The inner product on matrices is
/// the trace form Re tr(X Y^*), which restricts to tr(X Y^t) on real matrices.
/// Immutable after construction and safe to share across threads.
struct ActionModel {
  GroupTag tag = GroupTag::GL_real;
  Index n = 0;      // matrix size of the acting group
  Index dim_v = 0;  // real dimension of V

  /// Orthonormal basis of the symmetric part p: symmetric matrices (GL),
  /// traceless symmetric (SL), Hermitian (realified complex).
  std::vector<CMat> p_basis;
  /// Orthonormal basis of the full Lie algebra, for stabilizer computations.
  std::vector<CMat> full_basis;
  /// Basis used for the moment summation; equals p_basis except for SL, which
  /// sums over the full symmetric basis and projects the trace part away.
  std::vector<CMat> moment_basis;
  bool project_traceless = false;

  /// Infinitesimal action rho(X)v.
  std::function<Vec(const CMat&, const Vec&)> act;

  /// Optional group-level action rho(g)v. When present, projective flows
  /// integrate in group coordinates, which pins trajectories to the start's
  /// orbit instead of letting state noise feed unstable transverse modes.
  std::function<Vec(const CMat&, const Vec&)> group_action;
  /// Scaling behaviour (c I) . v = c^degree v; 0 marks group_action absent.
  double action_scaling_degree = 0.0;

  /// <a,b> on V is v_dot_scale * dot(a, b) in packed coordinates.
  double v_dot_scale = 1.0;

  double inner_v(const Vec& a, const Vec& b) const { return v_dot_scale * a.dot(b); }
  double v_norm_sq(const Vec& a) const { return v_dot_scale * a.squaredNorm(); }
  double v_norm(const Vec& a) const { return std::sqrt(v_norm_sq(a)); }

  /// Trace form on the Lie algebra.
  static double inner_g(const CMat& x, const CMat& y) {
    return (x.array() * y.array().conjugate()).sum().real();
  }

  Index algebra_dim() const { return static_cast<Index>(full_basis.size()); }

  void check_vector(const Vec& v) const {
    if (v.size() != dim_v)
      throw InputError("vector dimension " + std::to_string(v.size()) +
                       " does not match model dim_v " + std::to_string(dim_v));
  }
};

/// Orthonormal symmetric basis of p for GL_n(R): E_ii and (E_ij + E_ji)/sqrt(2).
std::vector<CMat> symmetric_basis(Index n);
/// Traceless symmetric orthonormal basis for SL_n(R).
std::vector<CMat> traceless_symmetric_basis(Index n);
/// Hermitian basis for realified GL_n(C): real diagonal, real symmetric
/// off-diagonal, imaginary skew off-diagonal, orthonormal under Re tr(XY*).
std::vector<CMat> hermitian_basis(Index n);

std::vector<CMat> gl_basis(Index n);                  // all E_ij
std::vector<CMat> sl_basis(Index n);                  // traceless
std::vector<CMat> gl_complex_realified_basis(Index n);  // E_ij and i E_ij

}  // namespace momentflow
