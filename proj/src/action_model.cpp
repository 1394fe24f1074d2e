#include "momentflow/action_model.hpp"

#include <cmath>

namespace momentflow {

const char* to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::GL_real: return "gl_real";
    case GroupTag::SL_real: return "sl_real";
    case GroupTag::GL_complex_realified: return "gl_complex_realified";
  }
  return "?";
}

std::vector<CMat> symmetric_basis(Index n) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<CMat> basis;
  basis.reserve(n * (n + 1) / 2);
  for (Index i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = e(j, i) = inv_sqrt2;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> traceless_symmetric_basis(Index n) {
  std::vector<CMat> basis;
  basis.reserve(n * (n + 1) / 2 - 1);
  // diag(1,...,1,-k,0,...)/sqrt(k(k+1)) with k ones
  for (Index k = 1; k < n; ++k) {
    CMat e = CMat::Zero(n, n);
    const double s = 1.0 / std::sqrt(double(k) * double(k + 1));
    for (Index i = 0; i < k; ++i) e(i, i) = s;
    e(k, k) = -double(k) * s;
    basis.push_back(e);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = e(j, i) = inv_sqrt2;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> hermitian_basis(Index n) {
  // Ordered: real diagonal, real symmetric off-diagonal, imaginary skew
  // off-diagonal, so the real-symmetric block leads and real tensors pair to
  // zero against the imaginary part.
  std::vector<CMat> basis = symmetric_basis(n);
  const Complex i_over_sqrt2(0.0, 1.0 / std::sqrt(2.0));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = -i_over_sqrt2;
      e(j, i) = i_over_sqrt2;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> gl_basis(Index n) {
  std::vector<CMat> basis;
  basis.reserve(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> sl_basis(Index n) {
  std::vector<CMat> basis;
  basis.reserve(n * n - 1);
  for (Index k = 1; k < n; ++k) {
    CMat e = CMat::Zero(n, n);
    const double s = 1.0 / std::sqrt(double(k) * double(k + 1));
    for (Index i = 0; i < k; ++i) e(i, i) = s;
    e(k, k) = -double(k) * s;
    basis.push_back(e);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      CMat e = CMat::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> gl_complex_realified_basis(Index n) {
  std::vector<CMat> basis = gl_basis(n);
  const Complex i1(0.0, 1.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = i1;
      basis.push_back(e);
    }
  return basis;
}

}  // namespace momentflow
