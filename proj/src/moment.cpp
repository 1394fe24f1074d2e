#include "momentflow/moment.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace momentflow {

MomentValue moment(const ActionModel& model, const Vec& v) {
  model.check_vector(v);
  MomentValue out;
  out.vector_norm_sq = model.v_norm_sq(v);
  CMat m = CMat::Zero(model.n, model.n);
  for (const CMat& x : model.moment_basis) m += model.inner_v(model.act(x, v), v) * x;
  if (model.project_traceless) {
    const double tr = m.trace().real() / double(model.n);
    m -= tr * CMat::Identity(model.n, model.n);
  }
  out.matrix = std::move(m);
  if (out.vector_norm_sq > 0.0)
    out.f_value = out.matrix.squaredNorm() / (out.vector_norm_sq * out.vector_norm_sq);
  return out;
}

Vec grad_f_sphere(const ActionModel& model, const Vec& v) {
  model.check_vector(v);
  if (std::abs(model.v_norm(v) - 1.0) > 1e-10)
    throw InputError("grad_f_sphere: input must lie on the unit sphere");
  const MomentValue mv = moment(model, v);
  const Vec a = model.act(mv.matrix, v);
  return 4.0 * (a - model.inner_v(a, v) * v);
}

CriticalCertificate critical_residual(const ActionModel& model, const Vec& v,
                                      double minimal_tol) {
  model.check_vector(v);
  const double norm_sq = model.v_norm_sq(v);
  if (norm_sq <= 0.0) throw InputError("critical_residual: zero vector");

  const MomentValue mv = moment(model, v);
  const double m_norm = mv.matrix.norm();

  CriticalCertificate cert;
  cert.lambda = m_norm * m_norm / norm_sq;
  cert.f_value = *mv.f_value;
  cert.critical_value_bucket = std::round(cert.f_value / kCriticalValueBucket) * kCriticalValueBucket;

  Eigen::SelfAdjointEigenSolver<CMat> es(mv.matrix / norm_sq, Eigen::EigenvaluesOnly);
  cert.spectrum = es.eigenvalues();
  std::sort(cert.spectrum.begin(), cert.spectrum.end());

  const double denom = m_norm * std::sqrt(norm_sq);
  if (denom == 0.0 || m_norm <= minimal_tol * norm_sq) {
    cert.residual = 0.0;  // (near-)minimal vector: the eigen-equation is vacuous
  } else {
    const Vec r = model.act(mv.matrix, v) - cert.lambda * v;
    cert.residual = model.v_norm(r) / denom;
  }
  return cert;
}

int stabilizer_dimension(const ActionModel& model, const Vec& v) {
  model.check_vector(v);
  const Index dim = model.algebra_dim();
  if (model.v_norm_sq(v) == 0.0) return static_cast<int>(dim);  // fixed by everything

  Mat contraction(model.dim_v, dim);
  for (Index k = 0; k < dim; ++k) contraction.col(k) = model.act(model.full_basis[k], v);
  Eigen::JacobiSVD<Mat> svd(contraction);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return static_cast<int>(dim);
  const double thr = kRankRelTol * sv[0];
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > thr) ++rank;
  return static_cast<int>(dim - rank);
}

}  // namespace momentflow
