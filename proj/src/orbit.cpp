#include "momentflow/orbit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "momentflow/rng.hpp"

namespace momentflow {

const char* to_string(Distinguished v) {
  return v == Distinguished::Distinguished ? "Distinguished" : "NotDetermined";
}

const char* to_string(ClosedVerdict v) {
  switch (v) {
    case ClosedVerdict::Closed: return "Closed";
    case ClosedVerdict::NullConeSuspected: return "NullConeSuspected";
    case ClosedVerdict::NotDetermined: return "NotDetermined";
  }
  return "?";
}

namespace {

// Looser Jacobi gate for tensors produced by flows, whose entries carry the
// integrator tolerance rather than exact catalog arithmetic.
constexpr double kLimitJacobiTol = 1e-6;

template <typename BracketType>
std::optional<AlgebraInvariants> try_invariants(const BracketType& mu, double tol) {
  if (!(jacobi_defect(mu) < tol)) return std::nullopt;
  return invariants(mu, tol);
}

}  // namespace

DistinguishedVerdict is_distinguished(const Bracket& mu, const FlowConfig& cfg,
                                      bool allow_non_lie) {
  if (mu.is_zero()) throw InputError("is_distinguished: zero bracket");
  if (!allow_non_lie && !(jacobi_defect(mu) < 1e-9))
    throw InputError("is_distinguished: tensor is not a Lie bracket (pass allow_non_lie for raw tensors)");

  const ActionModel model = bracket_action_model(mu.dim(), GroupTag::GL_real);
  const FlowResult flow = flow_projective(model, to_vector(mu), cfg);

  DistinguishedVerdict out;
  out.flow_status = flow.status;
  out.certificate = flow.certificate;
  out.limit_bracket = bracket_from_vector(mu.dim(), flow.limit_point);

  const auto start_inv = try_invariants(mu, kLimitJacobiTol);
  const auto limit_inv = try_invariants(out.limit_bracket, kLimitJacobiTol);
  out.invariants_match_start =
      start_inv && limit_inv && invariants_equal(*start_inv, *limit_inv);

  const bool certified = flow.status == FlowStatus::Converged &&
                         flow.certificate.residual < cfg.tol_residual;
  // Invariant mismatch signals numerical escape toward the orbit-closure
  // boundary; downgrade rather than certify.
  const bool lie_consistent = allow_non_lie ? true : out.invariants_match_start;
  out.verdict = certified && lie_consistent ? Distinguished::Distinguished
                                            : Distinguished::NotDetermined;
  return out;
}

ComplexDistinguishedVerdict is_distinguished_complex(const ComplexBracket& mu,
                                                     const FlowConfig& cfg,
                                                     bool allow_non_lie) {
  if (mu.is_zero()) throw InputError("is_distinguished_complex: zero bracket");
  if (!allow_non_lie && !(jacobi_defect(mu) < 1e-9))
    throw InputError("is_distinguished_complex: tensor is not a Lie bracket");

  const ActionModel model = complex_bracket_action_model(mu.dim());
  const FlowResult flow = flow_projective(model, to_vector(mu), cfg);

  ComplexDistinguishedVerdict out;
  out.flow_status = flow.status;
  out.certificate = flow.certificate;
  out.limit_bracket = complex_bracket_from_vector(mu.dim(), flow.limit_point);

  const auto start_inv = try_invariants(mu, kLimitJacobiTol);
  const auto limit_inv = try_invariants(out.limit_bracket, kLimitJacobiTol);
  out.invariants_match_start =
      start_inv && limit_inv && invariants_equal(*start_inv, *limit_inv);

  const bool certified = flow.status == FlowStatus::Converged &&
                         flow.certificate.residual < cfg.tol_residual;
  const bool lie_consistent = allow_non_lie ? true : out.invariants_match_start;
  out.verdict = certified && lie_consistent ? Distinguished::Distinguished
                                            : Distinguished::NotDetermined;
  return out;
}

std::optional<std::vector<long>> rationalize_ratios(const Vec& values, double window) {
  if (values.size() == 0) return std::nullopt;
  double scale = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > 1e-12 && (scale == 0.0 || a < scale)) scale = a;
  }
  if (scale == 0.0) return std::nullopt;
  for (long q = 1; q <= 64; ++q) {
    std::vector<long> p(values.size());
    bool ok = true;
    for (Index i = 0; i < values.size() && ok; ++i) {
      const double x = values[i] / scale * double(q);
      p[i] = std::lround(x);
      ok = std::abs(x - double(p[i])) <= window * double(q) * std::max(1.0, std::abs(values[i] / scale));
    }
    if (!ok) continue;
    long g = 0;
    for (long v : p) g = std::gcd(g, std::abs(v));
    if (g > 1)
      for (long& v : p) v /= g;
    return p;
  }
  return std::nullopt;
}

NilsolitonData nilsoliton_data(const Bracket& mu_crit, double tol_residual) {
  if (mu_crit.is_zero()) throw InputError("nilsoliton_data: zero bracket");
  if (!is_nilpotent(mu_crit))
    throw InputError("nilsoliton_data: bracket is not nilpotent");

  const ActionModel model = bracket_action_model(mu_crit.dim(), GroupTag::GL_real);
  const Vec v = to_vector(mu_crit);
  const CriticalCertificate cert = critical_residual(model, v);
  if (!(cert.residual < tol_residual))
    throw InputError("nilsoliton_data: bracket is not a critical point (residual " +
                     std::to_string(cert.residual) + ")");

  NilsolitonData out;
  out.soliton_constant = cert.lambda;
  const MomentValue mv = moment(model, v);
  const Mat d = mv.matrix.real() + cert.lambda * Mat::Identity(mu_crit.dim(), mu_crit.dim());
  out.derivation = d;

  const double defect = derivation_defect<double>(d, mu_crit);
  if (!(defect < 1e-8))
    throw std::logic_error("nilsoliton_data: derivation defect " + std::to_string(defect) +
                           " exceeds 1e-8 at a certified critical point");

  Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
  out.derivation_eigenvalues = es.eigenvalues();
  std::sort(out.derivation_eigenvalues.begin(), out.derivation_eigenvalues.end());
  out.eigenvalue_type = rationalize_ratios(out.derivation_eigenvalues);
  return out;
}

KOrbitSignature korbit_signature(const Vec& v, const ActionModel& model) {
  KOrbitSignature sig;
  const CriticalCertificate cert = critical_residual(model, v);
  sig.spectrum = cert.spectrum;
  sig.f = cert.f_value;
  if (model.tag == GroupTag::GL_complex_realified) {
    const ComplexBracket mu = complex_bracket_from_vector(model.n, v);
    if (auto inv = try_invariants(mu, kLimitJacobiTol)) sig.algebra = *inv;
  } else {
    const Bracket mu = bracket_from_vector(model.n, v);
    if (auto inv = try_invariants(mu, kLimitJacobiTol)) sig.algebra = *inv;
  }
  return sig;
}

bool signatures_equal(const KOrbitSignature& a, const KOrbitSignature& b, double tol) {
  if (a.spectrum.size() != b.spectrum.size()) return false;
  if ((a.spectrum - b.spectrum).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(a.f - b.f) > tol) return false;
  if (a.algebra.has_value() != b.algebra.has_value()) return false;
  if (a.algebra && !invariants_equal(*a.algebra, *b.algebra)) return false;
  return true;
}

RealComplexReport compare_real_complex(const Bracket& mu, const FlowConfig& cfg,
                                       std::uint64_t perturb_seed) {
  if (mu.is_zero()) throw InputError("compare_real_complex: zero bracket");

  RealComplexReport report;
  report.perturb_seed = perturb_seed;

  // Real-locus identity: the moment of the embedded tensor equals the real
  // moment matrix, imaginary block zero.
  const auto [embedded, cmodel] = complexify(mu);
  const ActionModel rmodel = bracket_action_model(mu.dim(), GroupTag::GL_real);
  const MomentValue real_m = moment(rmodel, to_vector(mu));
  const MomentValue complex_n = moment(cmodel, to_vector(embedded));
  report.real_locus_error = (complex_n.matrix - real_m.matrix).norm();

  report.real = is_distinguished(mu, cfg);
  report.complex_embedded = is_distinguished_complex(embedded, cfg);

  Rng rng(mix_seed(perturb_seed, "compare_real_complex"));
  const CMat g = random_well_conditioned_complex(rng, mu.dim());
  const ComplexBracket perturbed = group_act<Complex>(g, embedded);
  report.complex_perturbed = is_distinguished_complex(perturbed, cfg);

  report.mu_star_value = 4.0 * report.complex_embedded.certificate.f_value;
  // Agreement is judged between the real run and the complex run from the
  // embedded point; the perturbed run is reported as additional evidence.
  // (Perturbed starts on unstable critical strata cannot always be certified
  // numerically, even though the underlying statement holds for exact flows.)
  report.verdicts_agree = report.real.verdict == report.complex_embedded.verdict;
  return report;
}

ClosedOrbitReport is_closed_orbit_sl(const Bracket& mu, const FlowConfig& cfg) {
  if (mu.is_zero()) throw InputError("is_closed_orbit_sl: zero bracket");

  const ActionModel model = bracket_action_model(mu.dim(), GroupTag::SL_real);
  ClosedOrbitReport report;
  report.flow = flow_kempf_ness(model, to_vector(mu), cfg);
  report.norm_ratio = report.flow.norm_ratio;
  const MomentValue mv = moment(model, report.flow.limit_point);
  report.final_moment_over_norm_sq =
      mv.vector_norm_sq > 0.0 ? mv.matrix.norm() / mv.vector_norm_sq : 0.0;

  switch (report.flow.status) {
    case FlowStatus::Converged: report.verdict = ClosedVerdict::Closed; break;
    case FlowStatus::Diverged:
      report.verdict = report.flow.null_cone_indicator ? ClosedVerdict::NullConeSuspected
                                                       : ClosedVerdict::NotDetermined;
      break;
    default: report.verdict = ClosedVerdict::NotDetermined; break;
  }
  return report;
}

RealFormsReport compare_real_forms(const Bracket& mu1, const Bracket& mu2,
                                   const FlowConfig& cfg) {
  if (mu1.is_zero() || mu2.is_zero()) throw InputError("compare_real_forms: zero bracket");
  if (!(jacobi_defect(mu1) < 1e-9) || !(jacobi_defect(mu2) < 1e-9))
    throw InputError("compare_real_forms: inputs must be Lie brackets");

  RealFormsReport report;
  const AlgebraInvariants inv1 = invariants(embed_complex(mu1));
  const AlgebraInvariants inv2 = invariants(embed_complex(mu2));
  report.certified_real_forms = invariants_equal(inv1, inv2);
  if (!report.certified_real_forms)
    report.warning =
        "complexified invariants differ: not certified real forms of one complex "
        "algebra; comparison executed anyway";

  report.nilpotent_path = inv1.nilpotent && inv2.nilpotent;
  if (report.nilpotent_path) {
    report.distinguished_1 = is_distinguished(mu1, cfg);
    report.distinguished_2 = is_distinguished(mu2, cfg);
    report.verdicts_agree =
        report.distinguished_1->verdict == report.distinguished_2->verdict;
  } else {
    report.closed_1 = is_closed_orbit_sl(mu1, cfg);
    report.closed_2 = is_closed_orbit_sl(mu2, cfg);
    report.verdicts_agree = report.closed_1->verdict == report.closed_2->verdict;
  }
  return report;
}

}  // namespace momentflow
