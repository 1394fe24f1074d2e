#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momentflow/bracket_models.hpp"
#include "momentflow/flow.hpp"
#include "momentflow/invariants.hpp"

namespace momentflow {

enum class Distinguished { Distinguished, NotDetermined };
enum class ClosedVerdict { Closed, NullConeSuspected, NotDetermined };

const char* to_string(Distinguished v);
const char* to_string(ClosedVerdict v);

/// Flow-based evidence that an orbit contains a critical point of ||m||^2.
struct DistinguishedVerdict {
  Distinguished verdict = Distinguished::NotDetermined;
  CriticalCertificate certificate;
  Bracket limit_bracket;
  bool invariants_match_start = false;
  FlowStatus flow_status = FlowStatus::Diverged;
};

/// Complex-model counterpart; the limit lives in the realified representation.
struct ComplexDistinguishedVerdict {
  Distinguished verdict = Distinguished::NotDetermined;
  CriticalCertificate certificate;
  ComplexBracket limit_bracket;
  bool invariants_match_start = false;
  FlowStatus flow_status = FlowStatus::Diverged;
};

/// Soliton data attached to a critical nilpotent bracket.
struct NilsolitonData {
  double soliton_constant = 0.0;  // lambda
  Mat derivation;                 // D = m(mu) + lambda I, a derivation of mu
  Vec derivation_eigenvalues;     // sorted
  /// Smallest-integer eigenvalue ratios when within the rationalization
  /// window; otherwise empty and the raw spectrum stands.
  std::optional<std::vector<long>> eigenvalue_type;
};

/// K-invariant data separating critical points of distinct orbits.
struct KOrbitSignature {
  Vec spectrum;  // sorted spectrum of m[v]
  double f = 0.0;
  std::optional<AlgebraInvariants> algebra;  // present for Lie brackets
};

struct RealComplexReport {
  double real_locus_error = 0.0;  // |n(embedded mu) - m(mu)|, exact-zero check
  DistinguishedVerdict real;
  ComplexDistinguishedVerdict complex_embedded;
  ComplexDistinguishedVerdict complex_perturbed;
  double mu_star_value = 0.0;  // 4 x F at the complex limit
  bool verdicts_agree = false;
  std::uint64_t perturb_seed = 0;
};

struct ClosedOrbitReport {
  ClosedVerdict verdict = ClosedVerdict::NotDetermined;
  FlowResult flow;
  double final_moment_over_norm_sq = 0.0;  // |m_sl(v)| / |v|^2 at the end state
  double norm_ratio = 1.0;                 // |v_end|^2 / |v_0|^2
};

struct RealFormsReport {
  bool certified_real_forms = false;  // complexified invariants agree
  std::string warning;
  bool nilpotent_path = false;
  std::optional<DistinguishedVerdict> distinguished_1, distinguished_2;
  std::optional<ClosedOrbitReport> closed_1, closed_2;
  bool verdicts_agree = false;
};

/// Runs the projective flow under GL and certifies the limit. Distinguished
/// requires convergence, a certified residual, and limit invariants matching
/// the start (evidence the limit stayed in the orbit, "consistent with" only).
DistinguishedVerdict is_distinguished(const Bracket& mu, const FlowConfig& cfg,
                                      bool allow_non_lie = false);

/// Same decision for a complexified tensor under realified GL_n(C).
ComplexDistinguishedVerdict is_distinguished_complex(const ComplexBracket& mu,
                                                     const FlowConfig& cfg,
                                                     bool allow_non_lie = false);

/// Lambda, the soliton derivation D = m + lambda I, and its eigenvalue type.
/// Requires a critical nilpotent bracket.
NilsolitonData nilsoliton_data(const Bracket& mu_crit, double tol_residual = 1e-8);

KOrbitSignature korbit_signature(const Vec& v, const ActionModel& model);
bool signatures_equal(const KOrbitSignature& a, const KOrbitSignature& b, double tol);

/// Checks the real-locus identity, flows the complexified tensor from the
/// embedded point and a random complex perturbation, and compares verdicts.
RealComplexReport compare_real_complex(const Bracket& mu, const FlowConfig& cfg,
                                       std::uint64_t perturb_seed = 1);

/// Closed-orbit decision via the norm-minimizing flow under SL.
ClosedOrbitReport is_closed_orbit_sl(const Bracket& mu, const FlowConfig& cfg);

/// Compares two real brackets as candidate real forms of one complex algebra:
/// checks complexified invariants, then compares distinguished verdicts
/// (both nilpotent) or closed-orbit verdicts under SL.
RealFormsReport compare_real_forms(const Bracket& mu1, const Bracket& mu2,
                                   const FlowConfig& cfg);

/// Smallest-integer ratios p with values ~ c * p within window; empty when no
/// small rational pattern fits.
std::optional<std::vector<long>> rationalize_ratios(const Vec& values, double window = 1e-6);

}  // namespace momentflow
