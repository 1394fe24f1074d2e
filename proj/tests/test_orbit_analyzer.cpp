#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentflow/orbit.hpp"
#include "momentflow/rng.hpp"
#include "test_algebras.hpp"

using namespace momentflow;
using namespace testalg;

namespace {
FlowConfig cfg() { return FlowConfig{}; }
}  // namespace

TEST_CASE("is_distinguished certifies the Heisenberg orbit") {
  const DistinguishedVerdict v = is_distinguished(heisenberg3(), cfg());
  CHECK(v.verdict == Distinguished::Distinguished);
  CHECK(v.invariants_match_start);
  CHECK(v.certificate.residual < 1e-10);
  CHECK(v.certificate.f_value == doctest::Approx(3.0));

  CHECK_THROWS_AS(is_distinguished(Bracket(3), cfg()), InputError);

  Rng rng(401);
  const Bracket raw = random_bracket(rng, 3);
  CHECK_THROWS_AS(is_distinguished(raw, cfg()), InputError);       // not Lie
  const DistinguishedVerdict rv = is_distinguished(raw, cfg(), true);  // raw tensors allowed
  CHECK(rv.flow_status == FlowStatus::Converged);
}

TEST_CASE("verdict stability under well-conditioned group moves") {
  const DistinguishedVerdict base = is_distinguished(heisenberg3(), cfg());
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(409);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat g = random_well_conditioned(rng, 3);
    const DistinguishedVerdict moved = is_distinguished(group_act<double>(g, heisenberg3()), cfg());
    CHECK(moved.verdict == base.verdict);
    const KOrbitSignature sa = korbit_signature(to_vector(base.limit_bracket), model);
    const KOrbitSignature sb = korbit_signature(to_vector(moved.limit_bracket), model);
    CHECK(signatures_equal(sa, sb, 1e-5));
  }
}

TEST_CASE("nilsoliton data for Heisenberg") {
  const NilsolitonData d = nilsoliton_data(heisenberg3());
  CHECK(d.soliton_constant == doctest::Approx(6.0).epsilon(1e-12));
  Mat want(3, 3);
  want << 4, 0, 0, 0, 4, 0, 0, 0, 8;
  CHECK((d.derivation - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(derivation_defect<double>(d.derivation, heisenberg3()) < 1e-10);
  REQUIRE(d.eigenvalue_type.has_value());
  CHECK(*d.eigenvalue_type == std::vector<long>{1, 1, 2});

  // lambda scales with c^2, the type does not
  Bracket scaled = heisenberg3();
  scaled *= 2.5;
  const NilsolitonData ds = nilsoliton_data(scaled);
  CHECK(ds.soliton_constant == doctest::Approx(6.0 * 2.5 * 2.5));
  CHECK(*ds.eigenvalue_type == std::vector<long>{1, 1, 2});

  CHECK_THROWS_AS(nilsoliton_data(so3()), InputError);  // not nilpotent
  Bracket skew_filiform(4);  // [e1,e2] = e3, [e1,e3] = 2 e4: nilpotent, not critical
  skew_filiform.set(0, 1, 2, 1.0);
  skew_filiform.set(0, 2, 3, 2.0);
  CHECK(is_nilpotent(skew_filiform));
  CHECK_THROWS_AS(nilsoliton_data(skew_filiform), InputError);
}

TEST_CASE("nilsoliton data for h5 and the free 2-step algebra") {
  const NilsolitonData d5 = nilsoliton_data(heisenberg5());
  CHECK(d5.soliton_constant == doctest::Approx(8.0));
  REQUIRE(d5.eigenvalue_type.has_value());
  CHECK(*d5.eigenvalue_type == std::vector<long>{1, 1, 1, 1, 2});

  const NilsolitonData df = nilsoliton_data(free2step3());
  CHECK(df.soliton_constant == doctest::Approx(10.0));
  REQUIRE(df.eigenvalue_type.has_value());
  CHECK(*df.eigenvalue_type == std::vector<long>{1, 1, 1, 2, 2, 2});
}

TEST_CASE("rationalize_ratios behaviour") {
  Vec v(3);
  v << 4.0, 4.0, 8.0;
  CHECK(*rationalize_ratios(v) == std::vector<long>{1, 1, 2});
  v << 1.0, 1.5, 2.5;
  CHECK(*rationalize_ratios(v) == std::vector<long>{2, 3, 5});
  v << 1.0, M_PI, 4.0;
  CHECK(!rationalize_ratios(v).has_value());
}

TEST_CASE("K-orbit signatures separate the catalog algebras") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  const KOrbitSignature h3 = korbit_signature(to_vector(heisenberg3()), model);
  const KOrbitSignature s3 = korbit_signature(to_vector(so3()), model);
  CHECK(!signatures_equal(h3, s3, 1e-5));  // F = 3 vs 1/3, nilpotency differs
  CHECK(h3.f == doctest::Approx(3.0));
  CHECK(s3.f == doctest::Approx(1.0 / 3.0));
  REQUIRE(h3.algebra.has_value());
  CHECK(h3.algebra->nilpotent);
  CHECK(!s3.algebra->nilpotent);

  Rng rng(419);
  const Mat k = random_orthogonal(rng, 3);
  const KOrbitSignature rotated =
      korbit_signature(to_vector(group_act<double>(k, heisenberg3())), model);
  CHECK(signatures_equal(h3, rotated, 1e-10));
}

TEST_CASE("compare_real_complex on the Heisenberg algebra") {
  const RealComplexReport r = compare_real_complex(heisenberg3(), cfg(), 7);
  CHECK(r.real_locus_error < 1e-12);
  CHECK(r.real.verdict == Distinguished::Distinguished);
  CHECK(r.complex_embedded.verdict == Distinguished::Distinguished);
  CHECK(r.complex_perturbed.verdict == Distinguished::Distinguished);
  CHECK(r.verdicts_agree);
  CHECK(r.mu_star_value == doctest::Approx(12.0).epsilon(1e-8));

  CHECK_THROWS_AS(compare_real_complex(Bracket(3), cfg()), InputError);
}

TEST_CASE("real locus identity holds for random brackets") {
  Rng rng(421);
  const ActionModel rmodel = bracket_action_model(3, GroupTag::GL_real);
  for (int trial = 0; trial < 10; ++trial) {
    const Bracket mu = random_bracket(rng, 3);
    const auto [embedded, cmodel] = complexify(mu);
    const CMat nm = moment(cmodel, to_vector(embedded)).matrix;
    const CMat mm = moment(rmodel, to_vector(mu)).matrix;
    CHECK((nm - mm).norm() < 1e-12);
  }
}

TEST_CASE("closed orbit decisions under SL(3)") {
  const ClosedOrbitReport s = is_closed_orbit_sl(so3(), cfg());
  CHECK(s.verdict == ClosedVerdict::Closed);
  CHECK(s.flow.accepted_steps == 0);
  CHECK(s.final_moment_over_norm_sq < 1e-12);

  const ClosedOrbitReport l = is_closed_orbit_sl(sl2r(), cfg());
  CHECK(l.verdict == ClosedVerdict::Closed);
  CHECK(l.final_moment_over_norm_sq < 1e-6);

  const ClosedOrbitReport h = is_closed_orbit_sl(heisenberg3(), cfg());
  CHECK(h.verdict == ClosedVerdict::NullConeSuspected);
  CHECK(h.norm_ratio < 1e-3);

  CHECK_THROWS_AS(is_closed_orbit_sl(Bracket(3), cfg()), InputError);
}

TEST_CASE("compare_real_forms: so(3) and sl2(R) are certified and agree") {
  const RealFormsReport r = compare_real_forms(so3(), sl2r(), cfg());
  CHECK(r.certified_real_forms);
  CHECK(r.warning.empty());
  CHECK(!r.nilpotent_path);
  REQUIRE(r.closed_1.has_value());
  REQUIRE(r.closed_2.has_value());
  CHECK(r.closed_1->verdict == ClosedVerdict::Closed);
  CHECK(r.closed_2->verdict == ClosedVerdict::Closed);
  CHECK(r.verdicts_agree);
}

TEST_CASE("compare_real_forms: identical inputs trivially agree") {
  const RealFormsReport r = compare_real_forms(heisenberg3(), heisenberg3(), cfg());
  CHECK(r.certified_real_forms);
  CHECK(r.nilpotent_path);
  CHECK(r.verdicts_agree);
  CHECK(r.distinguished_1->verdict == Distinguished::Distinguished);
}

TEST_CASE("compare_real_forms warns on non-isomorphic complexifications") {
  const RealFormsReport r = compare_real_forms(heisenberg3(), so3(), cfg());
  CHECK(!r.certified_real_forms);
  CHECK(!r.warning.empty());
  // comparison still executed (general path: so3 closed, h3 null cone)
  REQUIRE(r.closed_1.has_value());
  CHECK(r.closed_1->verdict == ClosedVerdict::NullConeSuspected);
  CHECK(r.closed_2->verdict == ClosedVerdict::Closed);
  CHECK(!r.verdicts_agree);
}

TEST_CASE("nilsoliton derivation is symmetric") {
  for (const Bracket& mu : {heisenberg3(), heisenberg5(), free2step3()}) {
    const NilsolitonData d = nilsoliton_data(mu);
    CHECK((d.derivation - d.derivation.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  }
}
