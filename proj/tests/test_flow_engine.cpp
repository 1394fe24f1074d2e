#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentflow/bracket_models.hpp"
#include "momentflow/flow.hpp"
#include "momentflow/invariants.hpp"
#include "momentflow/rng.hpp"
#include "test_algebras.hpp"

using namespace momentflow;
using namespace testalg;

namespace {
FlowConfig quick_cfg() {
  FlowConfig cfg;
  return cfg;
}
}  // namespace

TEST_CASE("flow config validation") {
  FlowConfig cfg;
  cfg.validate();
  cfg.tol_grad = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = FlowConfig{};
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = FlowConfig{};
  cfg.max_flow_time = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("critical start converges immediately") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  const Vec v0 = to_vector(heisenberg3());
  const FlowResult r = flow_projective(model, v0, quick_cfg());
  CHECK(r.status == FlowStatus::Converged);
  CHECK(r.accepted_steps == 0);
  CHECK(r.elapsed_flow_time == 0.0);
  CHECK(model.v_norm(r.limit_point - v0 / model.v_norm(v0)) < 1e-14);
  CHECK(r.certificate.f_value == doctest::Approx(3.0));
  CHECK(r.certificate.residual < 1e-12);

  CHECK_THROWS_AS(flow_projective(model, Vec::Zero(model.dim_v), quick_cfg()), InputError);
}

TEST_CASE("perturbed Heisenberg flows land on the critical K-orbit") {
  // For n = 3 every point of the Heisenberg orbit is itself critical (any
  // invertible image of h3 is a rotation and scale of it), so these flows
  // certify instantly; the signature and invariants checks are the content.
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  const AlgebraInvariants h3_inv = invariants(heisenberg3());
  Rng rng(211);
  for (int trial = 0; trial < 3; ++trial) {
    const Mat g = random_well_conditioned(rng, 3);
    const Bracket moved = group_act<double>(g, heisenberg3());
    const FlowResult r = flow_projective(model, to_vector(moved), quick_cfg());
    REQUIRE(r.status == FlowStatus::Converged);
    CHECK(r.certificate.f_value == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(r.certificate.spectrum[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.certificate.spectrum[1] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.certificate.spectrum[2] == doctest::Approx(1.0).epsilon(1e-6));
    // certification maxima over every accepted step
    CHECK(r.max_f_increase <= 1e-12);
    CHECK(r.max_sphere_violation < 1e-12);
    // the limit is a bracket with Heisenberg invariants
    const Bracket limit = bracket_from_vector(3, r.limit_point);
    CHECK(invariants_equal(invariants(limit, 1e-6), h3_inv));
    for (size_t i = 1; i < r.f_history.size(); ++i)
      CHECK(r.f_history[i] <= r.f_history[i - 1] + 1e-12);
  }
}

TEST_CASE("perturbed sl2(R) integrates to its minimal-type critical locus") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(307);
  const Mat g = random_well_conditioned(rng, 3);
  const Bracket moved = group_act<double>(g, sl2r());
  const FlowResult r = flow_projective(model, to_vector(moved), quick_cfg());
  REQUIRE(r.status == FlowStatus::Converged);
  CHECK(r.accepted_steps > 10);  // a genuine integration, not an instant stop
  CHECK(r.certificate.f_value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(r.max_f_increase <= 1e-12);
  CHECK(r.max_sphere_violation < 1e-12);
  const Bracket limit = bracket_from_vector(3, r.limit_point);
  CHECK(invariants(limit, 1e-6).killing_signature == std::array<int, 3>{2, 1, 0});
  REQUIRE(r.f_history.size() >= 2);
  for (size_t i = 1; i < r.f_history.size(); ++i)
    CHECK(r.f_history[i] <= r.f_history[i - 1] + 1e-12);
}

TEST_CASE("SL minimal direction is stationary with F = 0") {
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  const FlowResult r = flow_projective(sl, to_vector(so3()), quick_cfg());
  CHECK(r.status == FlowStatus::Converged);
  CHECK(r.accepted_steps == 0);
  CHECK(r.certificate.f_value == 0.0);
  CHECK(r.certificate.lambda == 0.0);
  CHECK(r.certificate.residual == 0.0);
}

TEST_CASE("MaxTime reported when the budget is too small") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(223);
  FlowConfig cfg;
  cfg.max_flow_time = 1e-4;
  const FlowResult r = flow_projective(model, to_vector(random_bracket(rng, 3)), cfg);
  CHECK(r.status == FlowStatus::MaxTime);
  CHECK_THROWS_AS(omega_limit_representative(r), InputError);
}

TEST_CASE("omega limit representative re-certifies the limit") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(227);
  const Mat g = random_well_conditioned(rng, 3);
  const FlowResult r =
      flow_projective(model, to_vector(group_act<double>(g, heisenberg3())), quick_cfg());
  REQUIRE(r.status == FlowStatus::Converged);
  const CriticalCertificate cert = omega_limit_representative(r);
  // unit-sphere representative: lambda = F = 3, spectrum {-1,-1,1}
  CHECK(cert.lambda == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(cert.f_value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("kempf-ness rejects GL models and zero vectors") {
  const ActionModel gl = bracket_action_model(3, GroupTag::GL_real);
  CHECK_THROWS_WITH_AS(flow_kempf_ness(gl, to_vector(heisenberg3()), quick_cfg()),
                       doctest::Contains("trace identity"), InputError);
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  CHECK_THROWS_AS(flow_kempf_ness(sl, Vec::Zero(sl.dim_v), quick_cfg()), InputError);
}

TEST_CASE("kempf-ness: so(3) is already minimal") {
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  const FlowResult r = flow_kempf_ness(sl, to_vector(so3()), quick_cfg());
  CHECK(r.status == FlowStatus::Converged);
  CHECK(r.accepted_steps == 0);
  CHECK(r.certificate.residual == 0.0);
  CHECK(r.certificate.lambda == 0.0);
  const CriticalCertificate cert = omega_limit_representative(r);
  CHECK(cert.residual == 0.0);
}

TEST_CASE("kempf-ness: sl2(R) converges to a minimal vector, invariants preserved") {
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  const Vec v0 = to_vector(sl2r());
  const FlowResult r = flow_kempf_ness(sl, v0, quick_cfg());
  REQUIRE(r.status == FlowStatus::Converged);
  const MomentValue mv = moment(sl, r.limit_point);
  CHECK(mv.matrix.norm() / mv.vector_norm_sq < 1e-6);
  CHECK(r.max_normsq_increase <= 1e-10);
  CHECK(r.max_f_increase <= 1e-10);
  const Bracket limit = bracket_from_vector(3, r.limit_point);
  CHECK(invariants(limit, 1e-6).killing_signature == std::array<int, 3>{2, 1, 0});
  // norm decreases but stays away from zero on a closed orbit
  CHECK(r.norm_ratio < 1.0);
  CHECK(r.norm_ratio > 0.01);
}

TEST_CASE("kempf-ness: Heisenberg collapses toward the null cone") {
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  const FlowResult r = flow_kempf_ness(sl, to_vector(heisenberg3()), quick_cfg());
  CHECK(r.status == FlowStatus::Diverged);
  CHECK(r.null_cone_indicator);
  CHECK(r.norm_ratio <= 1e-4 * 1.0001);
  CHECK(r.max_normsq_increase <= 1e-10);
  // |v|^2 decays monotonically along the recorded trajectory
  for (size_t i = 1; i < r.normsq_history.size(); ++i)
    CHECK(r.normsq_history[i] <= r.normsq_history[i - 1] + 1e-10);
  CHECK_THROWS_AS(omega_limit_representative(r), InputError);
}

TEST_CASE("time rescaling: the flow of 4F matches the flow of F at t/4") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(229);
  const Vec v0 = to_vector(random_bracket(rng, 3));
  FlowConfig fast = quick_cfg();
  fast.field_scale = 4.0;
  // the earliest sample sits mid-transient, where the states still move
  const auto a = flow_projective_sample(model, v0, fast, {0.02, 0.1, 1.0});
  const auto b = flow_projective_sample(model, v0, quick_cfg(), {0.08, 0.4, 4.0});
  REQUIRE(a.size() == 3);
  CHECK(model.v_norm(a[0] - b[0]) < 1e-6);
  CHECK(model.v_norm(a[1] - b[1]) < 1e-6);
  CHECK(model.v_norm(a[2] - b[2]) < 1e-6);
  CHECK(model.v_norm(a[0] - a[2]) > 1e-3);  // the trajectory genuinely moved
}

TEST_CASE("orthogonal equivariance of the flow at a fixed time") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(233);
  const Bracket mu = random_bracket(rng, 3);
  const Mat k = random_orthogonal(rng, 3);
  const Bracket rotated = group_act<double>(k, mu);
  const auto plain = flow_projective_sample(model, to_vector(mu), quick_cfg(), {0.5});
  const auto moved = flow_projective_sample(model, to_vector(rotated), quick_cfg(), {0.5});
  const Bracket plain_rotated = group_act<double>(k, bracket_from_vector(3, plain[0]));
  CHECK(model.v_norm(to_vector(plain_rotated) - moved[0]) < 1e-6);
}

TEST_CASE("record stride thins the histories but keeps endpoints") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(239);
  const Mat g = random_well_conditioned(rng, 3);
  const Vec v0 = to_vector(group_act<double>(g, sl2r()));
  FlowConfig dense = quick_cfg();
  FlowConfig sparse = quick_cfg();
  sparse.record_stride = 50;
  const FlowResult rd = flow_projective(model, v0, dense);
  const FlowResult rs = flow_projective(model, v0, sparse);
  CHECK(rs.f_history.size() < rd.f_history.size());
  CHECK(rs.f_history.front() == doctest::Approx(rd.f_history.front()));
  CHECK(rs.f_history.back() == doctest::Approx(rd.f_history.back()));
}

TEST_CASE("realified complex flow: scalar phases leave the moment fixed") {
  // n is invariant under unit complex scalars, so e^{i theta} v0 is critical
  // exactly when v0 is, with the same Hermitian spectrum.
  const auto [embedded, cmodel] = complexify(heisenberg3());
  const Vec v = to_vector(embedded);
  const double theta = 0.7;
  const Vec rotated = std::cos(theta) * v + std::sin(theta) * times_i_realified(3, v);
  CHECK((moment(cmodel, rotated).matrix - moment(cmodel, v).matrix).norm() < 1e-12);

  const FlowResult r = flow_projective(cmodel, rotated, quick_cfg());
  CHECK(r.status == FlowStatus::Converged);
  CHECK(r.certificate.f_value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(r.certificate.spectrum[0] == doctest::Approx(-1.0));
  CHECK(r.certificate.spectrum[2] == doctest::Approx(1.0));
}

TEST_CASE("converged results satisfy the certification invariant") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  Rng rng(241);
  for (int trial = 0; trial < 3; ++trial) {
    const FlowResult r =
        flow_projective(model, to_vector(random_bracket(rng, 3)), quick_cfg());
    if (r.status == FlowStatus::Converged)
      CHECK(r.certificate.residual < r.config.tol_residual);
    // critical value buckets land on the grid
    CHECK(std::abs(r.certificate.critical_value_bucket -
                   std::round(r.certificate.f_value / 1e-6) * 1e-6) < 1e-15);
  }
}
