#include "momentflow/bracket_models.hpp"

namespace momentflow {

ActionModel bracket_action_model(Index n, GroupTag tag) {
  if (tag == GroupTag::GL_complex_realified) return complex_bracket_action_model(n);
  ActionModel model;
  model.tag = tag;
  model.n = n;
  model.dim_v = n * (n - 1) / 2 * n;
  model.v_dot_scale = 2.0;  // <mu,mu> sums over ordered pairs; storage is i<j
  if (tag == GroupTag::SL_real) {
    model.p_basis = traceless_symmetric_basis(n);
    model.full_basis = sl_basis(n);
    model.moment_basis = symmetric_basis(n);
    model.project_traceless = true;
  } else {
    model.p_basis = symmetric_basis(n);
    model.full_basis = gl_basis(n);
    model.moment_basis = model.p_basis;
  }
  model.act = [n](const CMat& x, const Vec& v) -> Vec {
    const Bracket mu = bracket_from_vector(n, v);
    return to_vector(infinitesimal_act<double>(x.real(), mu));
  };
  model.group_action = [n](const CMat& g, const Vec& v) -> Vec {
    const Bracket mu = bracket_from_vector(n, v);
    return to_vector(group_act_unchecked<double>(g.real(), mu));
  };
  model.action_scaling_degree = -1.0;  // (cI).mu = c^-1 mu
  return model;
}

ActionModel complex_bracket_action_model(Index n) {
  ActionModel model;
  model.tag = GroupTag::GL_complex_realified;
  model.n = n;
  model.dim_v = 2 * (n * (n - 1) / 2 * n);
  model.v_dot_scale = 2.0;
  model.p_basis = hermitian_basis(n);
  model.full_basis = gl_complex_realified_basis(n);
  model.moment_basis = model.p_basis;
  model.act = [n](const CMat& x, const Vec& v) -> Vec {
    const ComplexBracket mu = complex_bracket_from_vector(n, v);
    return to_vector(infinitesimal_act<Complex>(x, mu));
  };
  model.group_action = [n](const CMat& g, const Vec& v) -> Vec {
    const ComplexBracket mu = complex_bracket_from_vector(n, v);
    return to_vector(group_act_unchecked<Complex>(g, mu));
  };
  model.action_scaling_degree = -1.0;
  return model;
}

std::pair<ComplexBracket, ActionModel> complexify(const Bracket& mu) {
  return {embed_complex(mu), complex_bracket_action_model(mu.dim())};
}

}  // namespace momentflow
