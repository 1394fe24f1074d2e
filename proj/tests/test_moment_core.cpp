#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "momentflow/bracket_models.hpp"
#include "momentflow/moment.hpp"
#include "momentflow/rng.hpp"
#include "test_algebras.hpp"

using namespace momentflow;
using namespace testalg;

namespace {

void check_matrix_is(const CMat& m, const Mat& want, double tol = 1e-12) {
  REQUIRE(m.rows() == want.rows());
  CHECK((m.real() - want).cwiseAbs().maxCoeff() < tol);
  CHECK(m.imag().cwiseAbs().maxCoeff() < tol);
}

void check_against_oracle(const ActionModel& model, const Bracket& mu, double tol = 1e-12) {
  const auto m = moment(model, to_vector(mu)).matrix;
  const auto om = oracle::moment_matrix(to_oracle(mu));
  for (Index i = 0; i < model.n; ++i)
    for (Index j = 0; j < model.n; ++j)
      CHECK(std::abs(m(i, j).real() - om[size_t(i) * model.n + j]) < tol);
}

}  // namespace

TEST_CASE("moment reproduces the catalog matrices and the oracle") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);

  Mat h3(3, 3);
  h3 << -2, 0, 0, 0, -2, 0, 0, 0, 2;
  check_matrix_is(moment(model, to_vector(heisenberg3())).matrix, h3);
  check_matrix_is(moment(model, to_vector(so3())).matrix, -2.0 * Mat::Identity(3, 3));
  Mat sl2(3, 3);
  sl2 << -14, 0, 0, 0, -2, 0, 0, 0, -2;
  check_matrix_is(moment(model, to_vector(sl2r())).matrix, sl2);

  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial)
    check_against_oracle(model, random_bracket(rng, 3), 1e-10);
  const ActionModel model4 = bracket_action_model(4, GroupTag::GL_real);
  for (int trial = 0; trial < 3; ++trial)
    check_against_oracle(model4, random_bracket(rng, 4), 1e-10);
}

TEST_CASE("moment at zero, homogeneity, f scale invariance") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  const MomentValue zero = moment(model, Vec::Zero(model.dim_v));
  CHECK(zero.matrix.norm() == 0.0);
  CHECK(!zero.f_value.has_value());

  Rng rng(7);
  const Vec v = rng.vector(model.dim_v);
  const CMat m1 = moment(model, v).matrix;
  const double f1 = *moment(model, v).f_value;
  CHECK(f1 >= 0.0);
  for (double c : {-3.0, 0.5, 7.0}) {
    const Vec cv = c * v;
    CHECK((moment(model, cv).matrix - c * c * m1).norm() < 1e-10 * c * c * m1.norm());
    CHECK(*moment(model, cv).f_value == doctest::Approx(f1).epsilon(1e-12));
  }
  CHECK(moment(model, (0.0 * v).eval()).matrix.norm() == 0.0);
}

TEST_CASE("defining identity against every basis element") {
  Rng rng(13);
  for (GroupTag tag : {GroupTag::GL_real, GroupTag::SL_real}) {
    const ActionModel model = bracket_action_model(3, tag);
    for (int trial = 0; trial < 10; ++trial) {
      const Vec v = rng.vector(model.dim_v);
      const CMat m = moment(model, v).matrix;
      for (const CMat& x : model.p_basis)
        CHECK(std::abs(ActionModel::inner_g(m, x) - model.inner_v(model.act(x, v), v)) < 1e-10);
    }
  }
}

TEST_CASE("moment lies in span(p_basis) and obeys the trace identity") {
  Rng rng(17);
  const ActionModel model = bracket_action_model(4, GroupTag::GL_real);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec v = rng.vector(model.dim_v);
    const MomentValue mv = moment(model, v);
    CMat residual = mv.matrix;
    for (const CMat& x : model.p_basis) residual -= ActionModel::inner_g(mv.matrix, x) * x;
    CHECK(residual.norm() < 1e-12 * std::max(1.0, mv.matrix.norm()));
    CHECK(std::abs(mv.matrix.trace().real() + mv.vector_norm_sq) < 1e-10);
  }
}

TEST_CASE("orthogonal and unitary equivariance") {
  Rng rng(19);
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  for (int trial = 0; trial < 5; ++trial) {
    const Bracket mu = random_bracket(rng, 3);
    const Mat k = random_orthogonal(rng, 3);
    const CMat lhs = moment(model, to_vector(group_act<double>(k, mu))).matrix;
    const CMat rhs = k * moment(model, to_vector(mu)).matrix * k.transpose();
    CHECK((lhs - rhs).norm() < 1e-10);
    CHECK(*moment(model, to_vector(group_act<double>(k, mu))).f_value ==
          doctest::Approx(*moment(model, to_vector(mu)).f_value).epsilon(1e-10));
  }

  const ActionModel cmodel = complex_bracket_action_model(3);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexBracket mu(3);
    for (Index i = 0; i < mu.coeffs().size(); ++i)
      mu.coeffs()[i] = Complex(rng.symmetric(), rng.symmetric());
    const CMat k = random_unitary(rng, 3);
    const CMat lhs = moment(cmodel, to_vector(group_act<Complex>(k, mu))).matrix;
    const CMat rhs = k * moment(cmodel, to_vector(mu)).matrix * k.adjoint();
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("self-pairing identity <act(m,v), v> = ||m||^2") {
  Rng rng(23);
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec v = rng.vector(model.dim_v);
    const CMat m = moment(model, v).matrix;
    CHECK(std::abs(model.inner_v(model.act(m, v), v) - m.squaredNorm()) <
          1e-10 * std::max(1.0, m.squaredNorm()));
  }
}

TEST_CASE("SL moment is the traceless projection") {
  Rng rng(29);
  const ActionModel gl = bracket_action_model(3, GroupTag::GL_real);
  const ActionModel sl = bracket_action_model(3, GroupTag::SL_real);
  const Vec v = rng.vector(gl.dim_v);
  const CMat mgl = moment(gl, v).matrix;
  const CMat msl = moment(sl, v).matrix;
  CHECK(std::abs(msl.trace().real()) < 1e-12);
  const CMat projected = mgl - (mgl.trace().real() / 3.0) * CMat::Identity(3, 3);
  CHECK((msl - projected).norm() < 1e-12);

  // so(3) is minimal for SL_3, sl2(R) projects to diag(-8, 4, 4)
  CHECK(moment(sl, to_vector(so3())).matrix.norm() == 0.0);
  Mat want(3, 3);
  want << -8, 0, 0, 0, 4, 0, 0, 0, 4;
  check_matrix_is(moment(sl, to_vector(sl2r())).matrix, want);
}

TEST_CASE("grad_f_sphere vanishes at critical points and matches finite differences") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  const Vec h3 = to_vector(heisenberg3());
  const Vec unit = h3 / model.v_norm(h3);
  CHECK(model.v_norm(grad_f_sphere(model, unit)) < 1e-12);

  Rng rng(31);
  for (Index n : {Index(3), Index(4)}) {
    const ActionModel m = bracket_action_model(n, GroupTag::GL_real);
    for (int trial = 0; trial < 4; ++trial) {
      Vec v = rng.vector(m.dim_v);
      v /= m.v_norm(v);
      const Vec g = grad_f_sphere(m, v);
      const auto fd = oracle::sphere_fd_gradient(
          std::vector<double>(v.data(), v.data() + v.size()),
          [n](const std::vector<double>& packed) {
            oracle::TensorR t{int(n)};
            size_t slot = 0;
            for (int i = 0; i < int(n); ++i)
              for (int j = i + 1; j < int(n); ++j)
                for (int k = 0; k < int(n); ++k) t.set_entry(i, j, k, packed[slot++]);
            return t;
          });
      const Vec fd_vec = Eigen::Map<const Vec>(fd.data(), Index(fd.size()));
      CHECK(m.v_norm(g - fd_vec) / m.v_norm(g) < 1e-5);
    }
  }
}

TEST_CASE("grad_f_sphere input contract") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  CHECK_THROWS_AS(grad_f_sphere(model, 2.0 * to_vector(heisenberg3())), InputError);

  Rng rng(37);
  Vec v = rng.vector(model.dim_v);
  v /= model.v_norm(v);
  const Vec g = grad_f_sphere(model, v);
  CHECK(std::abs(model.inner_v(g, v)) < 1e-12 * std::max(1.0, model.v_norm(g)));
  // antipodal point: gradient of an even function is odd
  CHECK(model.v_norm(grad_f_sphere(model, (-v).eval()) + g) < 1e-12);
}

TEST_CASE("critical_residual certifies the catalog critical points") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);

  const CriticalCertificate h3 = critical_residual(model, to_vector(heisenberg3()));
  CHECK(h3.residual < 1e-12);
  CHECK(h3.lambda == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(h3.f_value == doctest::Approx(3.0).epsilon(1e-12));
  REQUIRE(h3.spectrum.size() == 3);
  CHECK(h3.spectrum[0] == doctest::Approx(-1.0));
  CHECK(h3.spectrum[1] == doctest::Approx(-1.0));
  CHECK(h3.spectrum[2] == doctest::Approx(1.0));

  // so(3): lambda = ||m||^2 / |mu|^2 = 12/6 = 2 (oracle-derived), F = 1/3.
  const CriticalCertificate s = critical_residual(model, to_vector(so3()));
  CHECK(s.residual < 1e-12);
  CHECK(s.lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.f_value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Rng rng(41);
  const CriticalCertificate r = critical_residual(model, to_vector(random_bracket(rng, 3)));
  CHECK(r.residual > 1e-8);  // generic tensors are not critical

  CHECK_THROWS_AS(critical_residual(model, Vec::Zero(model.dim_v)), InputError);
}

TEST_CASE("stabilizer_dimension matches the nullspace oracle") {
  const ActionModel model = bracket_action_model(3, GroupTag::GL_real);
  CHECK(stabilizer_dimension(model, Vec::Zero(model.dim_v)) == 9);

  const Bracket h3 = heisenberg3();
  const int real_dim = stabilizer_dimension(model, to_vector(h3));
  CHECK(real_dim == oracle::stabilizer_nullity(to_oracle(h3)));
  CHECK(real_dim == 6);

  const auto [embedded, cmodel] = complexify(h3);
  const int complex_dim = stabilizer_dimension(cmodel, to_vector(embedded));
  CHECK(complex_dim == oracle::stabilizer_nullity_realified(to_oracle(embedded)));
  CHECK(complex_dim == 2 * real_dim);

  Rng rng(43);
  const Bracket mu = random_bracket(rng, 3);
  CHECK(stabilizer_dimension(model, to_vector(mu)) ==
        oracle::stabilizer_nullity(to_oracle(mu)));
}

TEST_CASE("action model construction invariants") {
  Rng rng(47);
  for (GroupTag tag : {GroupTag::GL_real, GroupTag::SL_real, GroupTag::GL_complex_realified}) {
    const ActionModel model = bracket_action_model(3, tag);
    for (size_t i = 0; i < model.p_basis.size(); ++i)
      for (size_t j = 0; j < model.p_basis.size(); ++j) {
        const double want = i == j ? 1.0 : 0.0;
        CHECK(std::abs(ActionModel::inner_g(model.p_basis[i], model.p_basis[j]) - want) < 1e-12);
      }
    // bilinearity of act on random inputs
    const CMat x = tag == GroupTag::GL_complex_realified ? rng.cmatrix(3, 3)
                                                         : CMat(rng.matrix(3, 3));
    const CMat y = tag == GroupTag::GL_complex_realified ? rng.cmatrix(3, 3)
                                                         : CMat(rng.matrix(3, 3));
    const Vec v = rng.vector(model.dim_v);
    const Vec w = rng.vector(model.dim_v);
    CHECK((model.act(x + y, v) - model.act(x, v) - model.act(y, v)).norm() < 1e-12);
    CHECK((model.act(x, v + w) - model.act(x, v) - model.act(x, w)).norm() < 1e-12);
    CHECK((model.act((2.5 * x).eval(), v) - 2.5 * model.act(x, v)).norm() < 1e-12);
  }

  // realified multiplication by i commutes with the complex action
  const ActionModel cmodel = complex_bracket_action_model(3);
  const CMat x = rng.cmatrix(3, 3);
  const Vec v = rng.vector(cmodel.dim_v);
  CHECK((cmodel.act(x, times_i_realified(3, v)) - times_i_realified(3, cmodel.act(x, v)))
            .norm() < 1e-12);
}
