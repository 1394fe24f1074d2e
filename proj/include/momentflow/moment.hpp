#pragma once

#include <optional>

#include "momentflow/action_model.hpp"
#include "momentflow/types.hpp"

namespace momentflow {

/// Value of the moment map at a vector, with the derived scale-free data.
struct MomentValue {
  CMat matrix;                  // in span(p_basis); real models carry zero imag
  double vector_norm_sq = 0.0;  // |v|^2
  std::optional<double> f_value;  // ||matrix||^2 / |v|^4; empty at v = 0
};

/// Certificate for the critical-point equation rho(m(v))v = lambda v.
struct CriticalCertificate {
  double residual = 0.0;  // |rho(m(v))v - lambda v| / (|m(v)| |v|); 0 when m(v)=0
  double lambda = 0.0;    // ||m(v)||^2 / |v|^2
  Vec spectrum;           // sorted eigenvalues of m(v)/|v|^2
  double f_value = 0.0;
  double critical_value_bucket = 0.0;  // f rounded to the bucketing grid
};

/// Grid width used to bucket critical values of ||m||^2.
inline constexpr double kCriticalValueBucket = 1e-6;

/// Moment matrix M with <<M, X_i>> = <act(X_i, v), v> for every basis element,
/// computed by summation over the orthonormal basis. Defined for all v,
/// including v = 0 (zero matrix, f undefined).
MomentValue moment(const ActionModel& model, const Vec& v);

/// Tangential part of the gradient of F = ||m||^2 on the unit sphere:
/// 4 (act(m(v), v) - <act(m(v), v), v> v). Requires |v| = 1 within 1e-10.
Vec grad_f_sphere(const ActionModel& model, const Vec& v);

/// Residual of the eigenvector equation at v != 0. When |m(v)| <= minimal_tol
/// * |v|^2 the point counts as a (near-)minimal vector and the residual is 0.
CriticalCertificate critical_residual(const ActionModel& model, const Vec& v,
                                      double minimal_tol = 0.0);

/// Nullity of X -> act(X, v) over the full Lie algebra, by singular-value rank.
/// For v = 0 the stabilizer is everything and the algebra dimension returns.
int stabilizer_dimension(const ActionModel& model, const Vec& v);

}  // namespace momentflow
