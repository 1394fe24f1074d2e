#pragma once

#include <array>
#include <vector>

#include "momentflow/bracket.hpp"
#include "momentflow/types.hpp"

namespace momentflow {

/// Isomorphism invariants of a Lie bracket. Equality of these certifies
/// "invariants consistent", never isomorphism itself.
struct AlgebraInvariants {
  std::vector<int> lower_central_dims;  // starts at n, non-increasing
  std::vector<int> derived_dims;
  int center_dim = 0;
  int derivation_dim = 0;
  // Real brackets: (positive, negative, zero) eigenvalue counts of the Killing
  // form. Complex brackets: (rank, 0, nullity), the only invariants over C.
  std::array<int, 3> killing_signature{0, 0, 0};
  double jacobi_defect = 0.0;
  bool nilpotent = false;

  bool solvable() const { return !derived_dims.empty() && derived_dims.back() == 0; }
};

/// All dimensions by numerical rank (relative threshold kRankRelTol).
/// Throws InputError when jacobi_defect(mu) >= jacobi_tol.
AlgebraInvariants invariants(const Bracket& mu, double jacobi_tol = 1e-9);
AlgebraInvariants invariants(const ComplexBracket& mu, double jacobi_tol = 1e-9);

/// Componentwise equality of the integer data (jacobi defects are not compared).
bool invariants_equal(const AlgebraInvariants& a, const AlgebraInvariants& b);

}  // namespace momentflow
