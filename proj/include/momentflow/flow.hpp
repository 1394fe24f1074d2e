#pragma once

#include <memory>
#include <string>
#include <vector>

#include "momentflow/moment.hpp"

namespace momentflow {

struct FlowConfig {
  double tol_grad = 1e-10;
  double tol_residual = 1e-8;
  double max_flow_time = 1e4;
  double rk_rel_tol = 1e-9;
  double rk_abs_tol = 1e-12;
  long max_steps = 1000000;
  int record_stride = 1;
  /// Integrates field_scale * (-grad F); 4 reproduces the flow of 4F.
  double field_scale = 1.0;

  /// Throws InputError unless every tolerance/budget is positive and finite.
  void validate() const;
};

enum class FlowStatus { Converged, MaxTime, Stalled, Diverged };

const char* to_string(FlowStatus s);

/// Trajectory summary. The limit_point is the computed representative of the
/// omega-limit set of the trajectory.
struct FlowResult {
  Vec limit_point;
  FlowStatus status = FlowStatus::Diverged;
  std::vector<double> time_history;
  std::vector<double> f_history;
  std::vector<double> gradnorm_history;
  std::vector<double> normsq_history;  // |v|^2 samples (Kempf-Ness flows)
  double elapsed_flow_time = 0.0;
  long accepted_steps = 0;
  CriticalCertificate certificate;  // evaluated at limit_point

  // Certification maxima tracked at every accepted step, independent of the
  // recording stride.
  double max_f_increase = 0.0;
  double max_sphere_violation = 0.0;  // projective flows only
  double max_normsq_increase = 0.0;   // Kempf-Ness flows only

  /// Set when a Kempf-Ness flow stopped on norm collapse; a heuristic
  /// null-cone indicator, never a mathematical verdict.
  bool null_cone_indicator = false;
  double norm_ratio = 1.0;  // |v_end|^2 / |v_0|^2

  std::string diagnostic;
  FlowConfig config;
  std::shared_ptr<const ActionModel> model;
};

/// Negative gradient flow of F on the unit sphere: integrates
/// v' = -4 (act(m(v), v) - ||m(v)||^2 v) with an adaptive embedded
/// Runge-Kutta 5(4) pair, renormalizing after every accepted step. Converged
/// requires both gradient norm < tol_grad and a certified residual.
FlowResult flow_projective(const ActionModel& model, const Vec& v0, const FlowConfig& cfg);

/// States of the projective flow at the requested times (no early stopping).
std::vector<Vec> flow_projective_sample(const ActionModel& model, const Vec& v0,
                                        const FlowConfig& cfg, const std::vector<double>& times);

/// Norm-minimizing flow v' = -act(m(v), v) on V, for the SL model only.
/// |v|^2 is non-increasing; Converged means |m(v)| < tol_grad |v|^2 (minimal
/// vector found); Diverged reports norm collapse toward the null cone, a
/// diagnostic rather than a proof.
FlowResult flow_kempf_ness(const ActionModel& model, const Vec& v0, const FlowConfig& cfg);

/// Re-evaluates the critical residual at the limit of a converged flow.
/// Throws on non-converged input.
CriticalCertificate omega_limit_representative(const FlowResult& result);

}  // namespace momentflow
