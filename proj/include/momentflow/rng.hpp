#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "momentflow/types.hpp"

namespace momentflow {

/// Deterministic random source. Doubles are derived from raw mt19937_64 words
/// so that seeded streams are identical across standard library
/// implementations (std::uniform_real_distribution is not pinned).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  double symmetric(double r = 1.0) { return uniform(-r, r); }

  Mat matrix(Index rows, Index cols, double r = 1.0) {
    Mat m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = symmetric(r);
    return m;
  }

  CMat cmatrix(Index rows, Index cols, double r = 1.0) {
    CMat m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = Complex(symmetric(r), symmetric(r));
    return m;
  }

  Vec vector(Index size, double r = 1.0) {
    Vec v(size);
    for (Index i = 0; i < size; ++i) v[i] = symmetric(r);
    return v;
  }

private:
  std::mt19937_64 gen_;
};

/// FNV-1a fold of a label into a base seed; stable across platforms.
std::uint64_t mix_seed(std::uint64_t base, std::string_view label);

/// Entries uniform in [-1, 1], resampled until cond(g) < max_cond.
Mat random_well_conditioned(Rng& rng, Index n, double max_cond = 100.0);
CMat random_well_conditioned_complex(Rng& rng, Index n, double max_cond = 100.0);

/// Haar-ish orthogonal/unitary matrices via QR with sign-fixed diagonal.
Mat random_orthogonal(Rng& rng, Index n);
CMat random_unitary(Rng& rng, Index n);

}  // namespace momentflow
