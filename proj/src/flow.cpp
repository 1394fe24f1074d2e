#include "momentflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace momentflow {

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "Converged";
    case FlowStatus::MaxTime: return "MaxTime";
    case FlowStatus::Stalled: return "Stalled";
    case FlowStatus::Diverged: return "Diverged";
  }
  return "?";
}

void FlowConfig::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(tol_grad) || !positive(tol_residual) || !positive(max_flow_time) ||
      !positive(rk_rel_tol) || !positive(rk_abs_tol) || !positive(field_scale))
    throw InputError("flow config: tolerances and budgets must be positive and finite");
  if (max_steps <= 0 || record_stride <= 0)
    throw InputError("flow config: max_steps and record_stride must be positive");
}

namespace {

// |v|^2 drop marking a Kempf-Ness trajectory as collapsing toward the null cone.
constexpr double kNullConeNormRatio = 1e-4;
// Accepted steps without a 1% gradient-norm drop before reporting Stalled.
constexpr long kStallWindow = 10000;

using Rhs = std::function<Vec(const Vec&)>;

struct RkAttempt {
  Vec y;
  double err = 0.0;  // scaled error norm; accept when <= 1
  bool finite = true;
};

/// One Dormand-Prince 5(4) step from y with increment h; k1 = rhs(y).
RkAttempt dopri_step(const Rhs& rhs, const Vec& y, const Vec& k1, double h, double rel_tol,
                     double abs_tol) {
  const Vec k2 = rhs(y + h * (1.0 / 5.0) * k1);
  const Vec k3 = rhs(y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
  const Vec k4 = rhs(y + h * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
  const Vec k5 = rhs(y + h * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                              (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4));
  const Vec k6 = rhs(y + h * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 +
                              (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                              (5103.0 / 18656.0) * k5));
  RkAttempt out;
  out.y = y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 + (125.0 / 192.0) * k4 -
                   (2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
  const Vec k7 = rhs(out.y);
  const Vec y4 = y + h * ((5179.0 / 57600.0) * k1 + (7571.0 / 16695.0) * k3 +
                          (393.0 / 640.0) * k4 - (92097.0 / 339200.0) * k5 +
                          (187.0 / 2100.0) * k6 + (1.0 / 40.0) * k7);
  if (!out.y.allFinite() || !y4.allFinite()) {
    out.finite = false;
    return out;
  }
  double acc = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out.y[i]));
    const double e = (out.y[i] - y4[i]) / sc;
    acc += e * e;
  }
  out.err = std::sqrt(acc / double(y.size()));
  return out;
}

double next_step_size(double h, double err) {
  const double factor =
      err <= 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
  return h * factor;
}

struct ProjectiveEval {
  MomentValue mv;
  Vec gradient;  // unscaled sphere gradient of F
  double gnorm = 0.0;
  double f = 0.0;
};

ProjectiveEval eval_projective(const ActionModel& model, const Vec& v) {
  ProjectiveEval e;
  e.mv = moment(model, v);
  const Vec a = model.act(e.mv.matrix, v);
  e.gradient = 4.0 * (a - (model.inner_v(a, v) / model.v_norm_sq(v)) * v);
  e.gnorm = model.v_norm(e.gradient);
  e.f = *e.mv.f_value;
  return e;
}

/// Projective flow state. With a group action available the ODE state is the
/// group element acting on the (fixed) start vector: the vector field is
/// rho(X(v)) v with X(v) = -4 (m[v] + ||m[v]||^2 I), so trajectories of
/// g' = X(g.v0) g remain inside the start's orbit by construction. Direct
/// vector-space integration is the fallback; it admits noise growth along
/// unstable directions transverse to the orbit.
class ProjectiveState {
public:
  ProjectiveState(const ActionModel& model, const Vec& v0_unit, double field_scale)
      : model_(model), v0_(v0_unit), scale_(field_scale) {
    group_mode_ = static_cast<bool>(model.group_action) && model.action_scaling_degree != 0.0;
    if (group_mode_) {
      complex_ = model.tag == GroupTag::GL_complex_realified;
      state_ = pack(CMat::Identity(model.n, model.n));
    } else {
      state_ = v0_;
    }
  }

  const Vec& raw() const { return state_; }
  void set_raw(Vec s) { state_ = std::move(s); }

  Vec vector_of(const Vec& s) const {
    return group_mode_ ? model_.group_action(unpack(s), v0_) : s;
  }
  Vec vector() const { return vector_of(state_); }

  /// ODE right-hand side in the chosen coordinates.
  Vec rhs(const Vec& s) const {
    if (!group_mode_) {
      const Vec& y = s;
      const MomentValue mv = moment(model_, y);
      const Vec a = model_.act(mv.matrix, y);
      return -scale_ * 4.0 * (a - (model_.inner_v(a, y) / model_.v_norm_sq(y)) * y);
    }
    const CMat g = unpack(s);
    const Vec v = model_.group_action(g, v0_);
    const CMat x = field_matrix(v);
    return pack((x * g).eval());
  }

  /// Renormalizes |v| to 1 and, in group mode, re-anchors the orbit at the
  /// current point (v0 <- v, g <- I). Re-anchoring keeps the stored group
  /// element near the identity, so its conditioning never degrades and the
  /// only off-orbit error per step is at rounding level; integrator
  /// truncation error stays inside the group.
  Vec renormalize() {
    Vec v = vector();
    const double norm = model_.v_norm(v);
    v /= norm;
    if (group_mode_) {
      v0_ = v;
      state_ = pack(CMat::Identity(model_.n, model_.n));
    } else {
      state_ = v;
    }
    return v;
  }

private:
  /// X(v) = -scale * 4 (m + ||m||^2 I); rho(X) v is the descent field, using
  /// rho(I)v = degree * v to absorb the tangential projection.
  CMat field_matrix(const Vec& v) const {
    const MomentValue mv = moment(model_, v);
    const CMat m = mv.matrix / mv.vector_norm_sq;
    const double lambda_hat = m.squaredNorm();
    const double d = model_.action_scaling_degree;
    // field = -4 (rho(m) v - lambda_hat v) and v = rho(I) v / d
    return -scale_ * 4.0 * (m - (lambda_hat / d) * CMat::Identity(model_.n, model_.n));
  }

  Vec pack(const CMat& g) const {
    const Index n = model_.n;
    Vec s(complex_ ? 2 * n * n : n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        s[i * n + j] = g(i, j).real();
        if (complex_) s[n * n + i * n + j] = g(i, j).imag();
      }
    return s;
  }

  CMat unpack(const Vec& s) const {
    const Index n = model_.n;
    CMat g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        g(i, j) = Complex(s[i * n + j], complex_ ? s[n * n + i * n + j] : 0.0);
    return g;
  }

  const ActionModel& model_;
  Vec v0_;
  double scale_;
  bool group_mode_ = false;
  bool complex_ = false;
  Vec state_;
};

struct Recorder {
  FlowResult* r;
  int stride;
  long last_recorded = -1;

  void record(long step, double t, double f, double gnorm, double normsq) {
    if (step % stride != 0 && step != 0) return;
    push(step, t, f, gnorm, normsq);
  }
  void push(long step, double t, double f, double gnorm, double normsq) {
    if (step == last_recorded) return;
    last_recorded = step;
    r->time_history.push_back(t);
    r->f_history.push_back(f);
    r->gradnorm_history.push_back(gnorm);
    r->normsq_history.push_back(normsq);
  }
};

FlowResult make_result(const ActionModel& model, const FlowConfig& cfg) {
  FlowResult r;
  r.config = cfg;
  r.model = std::make_shared<ActionModel>(model);
  return r;
}

}  // namespace

FlowResult flow_projective(const ActionModel& model, const Vec& v0, const FlowConfig& cfg) {
  cfg.validate();
  model.check_vector(v0);
  const double start_norm = model.v_norm(v0);
  if (start_norm == 0.0) throw InputError("flow_projective: zero start vector");

  FlowResult result = make_result(model, cfg);
  Recorder rec{&result, cfg.record_stride};

  // Keep the integrator noise floor below the gradient stopping threshold.
  const double rk_rel = std::min(cfg.rk_rel_tol, 0.1 * cfg.tol_grad);
  const double rk_abs = std::min(cfg.rk_abs_tol, 1e-3 * rk_rel);

  ProjectiveState ps(model, v0 / start_norm, cfg.field_scale);
  const Rhs rhs = [&ps](const Vec& s) { return ps.rhs(s); };

  Vec v = ps.vector();
  ProjectiveEval cur = eval_projective(model, v);
  rec.record(0, 0.0, cur.f, cur.gnorm, 1.0);

  double t = 0.0;
  long steps = 0;
  double h = std::clamp(1e-2 / std::max(cfg.field_scale * cur.gnorm, 1e-8), 1e-8, 1.0);
  double stall_best = cur.gnorm;
  long stall_count = 0;
  FlowStatus status = FlowStatus::MaxTime;

  while (true) {
    if (cur.gnorm < cfg.tol_grad) {
      const CriticalCertificate cert = critical_residual(model, v, cfg.tol_grad);
      if (cert.residual < cfg.tol_residual) {
        status = FlowStatus::Converged;
        break;
      }
    }
    if (t >= cfg.max_flow_time || steps >= cfg.max_steps) {
      status = FlowStatus::MaxTime;
      break;
    }
    if (stall_count >= kStallWindow) {
      status = FlowStatus::Stalled;
      break;
    }

    const Vec k1 = rhs(ps.raw());
    const double h_try = std::min(h, cfg.max_flow_time - t);
    const RkAttempt attempt = dopri_step(rhs, ps.raw(), k1, h_try, rk_rel, rk_abs);
    if (!attempt.finite) {
      status = FlowStatus::Diverged;
      result.diagnostic = "non-finite state during integration";
      break;
    }
    if (attempt.err <= 1.0) {
      ps.set_raw(attempt.y);
      Vec v_new = ps.renormalize();
      result.max_sphere_violation =
          std::max(result.max_sphere_violation, std::abs(model.v_norm(v_new) - 1.0));
      t += h_try;
      ++steps;
      const ProjectiveEval next = eval_projective(model, v_new);
      result.max_f_increase = std::max(result.max_f_increase, next.f - cur.f);
      v = std::move(v_new);
      cur = next;
      rec.record(steps, t, cur.f, cur.gnorm, 1.0);
      if (cur.gnorm < 0.99 * stall_best) {
        stall_best = cur.gnorm;
        stall_count = 0;
      } else if (cur.gnorm >= cfg.tol_grad) {
        ++stall_count;
      }
    }
    h = next_step_size(h_try, attempt.err);
  }

  result.limit_point = v;
  result.status = status;
  result.elapsed_flow_time = t;
  result.accepted_steps = steps;
  rec.push(steps, t, cur.f, cur.gnorm, 1.0);
  result.certificate = critical_residual(model, v, cfg.tol_grad);
  return result;
}

std::vector<Vec> flow_projective_sample(const ActionModel& model, const Vec& v0,
                                        const FlowConfig& cfg, const std::vector<double>& times) {
  cfg.validate();
  model.check_vector(v0);
  const double start_norm = model.v_norm(v0);
  if (start_norm == 0.0) throw InputError("flow_projective_sample: zero start vector");
  for (size_t i = 0; i < times.size(); ++i)
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1]))
      throw InputError("flow_projective_sample: times must be non-negative and ascending");

  ProjectiveState ps(model, v0 / start_norm, cfg.field_scale);
  const Rhs rhs = [&ps](const Vec& s) { return ps.rhs(s); };

  std::vector<Vec> states;
  states.reserve(times.size());
  double t = 0.0;
  double h = 1e-4;
  long steps = 0;
  for (double target : times) {
    while (t < target) {
      if (steps >= cfg.max_steps)
        throw InputError("flow_projective_sample: step budget exhausted");
      const Vec k1 = rhs(ps.raw());
      const double h_try = std::min(h, target - t);
      const RkAttempt attempt = dopri_step(rhs, ps.raw(), k1, h_try, cfg.rk_rel_tol, cfg.rk_abs_tol);
      if (!attempt.finite)
        throw InputError("flow_projective_sample: non-finite state during integration");
      if (attempt.err <= 1.0) {
        ps.set_raw(attempt.y);
        ps.renormalize();
        t += h_try;
        ++steps;
      }
      h = next_step_size(h_try, attempt.err);
    }
    states.push_back(ps.vector() / model.v_norm(ps.vector()));
  }
  return states;
}

FlowResult flow_kempf_ness(const ActionModel& model, const Vec& v0, const FlowConfig& cfg) {
  cfg.validate();
  model.check_vector(v0);
  if (model.tag == GroupTag::GL_real || model.tag == GroupTag::GL_complex_realified)
    throw InputError(
        "flow_kempf_ness: requires the SL model; under GL the trace identity "
        "tr m(mu) = -|mu|^2 makes m = 0 unreachable for nonzero tensors");
  const double start_norm_sq = model.v_norm_sq(v0);
  if (start_norm_sq == 0.0) throw InputError("flow_kempf_ness: zero start vector");

  FlowResult result = make_result(model, cfg);
  Recorder rec{&result, cfg.record_stride};

  // The stop test |m(v)| < tol_grad |v|^2 is only reachable when the
  // integrator noise floor sits below it; refine the step tolerances to match.
  const double rk_rel = std::min(cfg.rk_rel_tol, 0.1 * cfg.tol_grad);
  const double rk_abs = std::min(cfg.rk_abs_tol, 1e-3 * rk_rel);

  Vec v = v0;
  const Rhs rhs = [&](const Vec& y) -> Vec {
    const MomentValue mv = moment(model, y);
    return -cfg.field_scale * model.act(mv.matrix, y);
  };

  auto moment_norm = [&](const Vec& y) { return moment(model, y).matrix.norm(); };

  double t = 0.0;
  long steps = 0;
  double norm_sq = start_norm_sq;
  double m_norm = moment_norm(v);
  double f = norm_sq > 0.0 ? (m_norm * m_norm) / (norm_sq * norm_sq) : 0.0;
  double gnorm = model.v_norm(rhs(v)) / cfg.field_scale;
  rec.record(0, 0.0, f, gnorm, norm_sq);
  double h = std::clamp(1e-2 / std::max(cfg.field_scale * gnorm, 1e-8), 1e-8, 1.0);
  double stall_best = gnorm;
  long stall_count = 0;
  FlowStatus status = FlowStatus::MaxTime;

  while (true) {
    if (m_norm < cfg.tol_grad * norm_sq) {
      status = FlowStatus::Converged;  // minimal vector located
      break;
    }
    if (norm_sq <= kNullConeNormRatio * start_norm_sq) {
      status = FlowStatus::Diverged;
      result.null_cone_indicator = true;
      result.diagnostic =
          "norm collapse: |v|^2 fell below " + std::to_string(kNullConeNormRatio) +
          " of its initial value while m stayed away from zero (null-cone indicator)";
      break;
    }
    if (t >= cfg.max_flow_time || steps >= cfg.max_steps) {
      status = FlowStatus::MaxTime;
      break;
    }
    if (stall_count >= kStallWindow) {
      status = FlowStatus::Stalled;
      break;
    }

    const Vec k1 = rhs(v);
    const double h_try = std::min(h, cfg.max_flow_time - t);
    const RkAttempt attempt = dopri_step(rhs, v, k1, h_try, rk_rel, rk_abs);
    if (!attempt.finite) {
      status = FlowStatus::Diverged;
      result.diagnostic = "non-finite state during integration";
      break;
    }
    if (attempt.err <= 1.0) {
      t += h_try;
      ++steps;
      v = attempt.y;
      const double norm_sq_new = model.v_norm_sq(v);
      result.max_normsq_increase =
          std::max(result.max_normsq_increase, norm_sq_new - norm_sq);
      norm_sq = norm_sq_new;
      m_norm = moment_norm(v);
      const double f_new =
          norm_sq > 0.0 ? (m_norm * m_norm) / (norm_sq * norm_sq) : 0.0;
      result.max_f_increase = std::max(result.max_f_increase, f_new - f);
      f = f_new;
      gnorm = cfg.field_scale > 0.0 ? model.v_norm(rhs(v)) / cfg.field_scale : 0.0;
      rec.record(steps, t, f, gnorm, norm_sq);
      if (gnorm < 0.99 * stall_best) {
        stall_best = gnorm;
        stall_count = 0;
      } else if (m_norm >= cfg.tol_grad * norm_sq) {
        ++stall_count;
      }
    }
    h = next_step_size(h_try, attempt.err);
  }

  result.limit_point = v;
  result.status = status;
  result.elapsed_flow_time = t;
  result.accepted_steps = steps;
  result.norm_ratio = norm_sq / start_norm_sq;
  rec.push(steps, t, f, gnorm, norm_sq);
  result.certificate = critical_residual(model, v, cfg.tol_grad);
  return result;
}

CriticalCertificate omega_limit_representative(const FlowResult& result) {
  if (result.status != FlowStatus::Converged)
    throw InputError("omega_limit_representative: flow did not converge (status " +
                     std::string(to_string(result.status)) + ")");
  if (!result.model) throw std::logic_error("omega_limit_representative: result carries no model");
  const CriticalCertificate cert =
      critical_residual(*result.model, result.limit_point, result.config.tol_grad);
  if (!(cert.residual < result.config.tol_residual))
    throw std::logic_error("omega_limit_representative: converged result fails certification");
  return cert;
}

}  // namespace momentflow
