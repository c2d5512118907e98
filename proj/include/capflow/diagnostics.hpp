#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "capflow/caps.hpp"
#include "capflow/flow.hpp"

namespace capflow {

/// Scalar diagnostics of one time slice. Radii are NaN when not computed.
struct Snapshot {
  double t = 0.0;
  long step = 0;
  double area = 0.0;
  double wetted = 0.0;
  double volume = 0.0;
  double W_theta = 0.0;            // |S| - cos(theta)|wetted|
  double W_theta_integrand = 0.0;  // quadrature of (1 - cos(theta) nuE) dA
  double I_theta = 0.0;
  double phi = 0.0;
  double q = 0.0;
  double H_min = 0.0;
  double H_max = 0.0;
  double kappa_min = 0.0;
  double contact_residual = 0.0;
  double ubar_min = 0.0;
  double rho_minus = 0.0;
  double rho_plus = 0.0;
  double fit_residual = 0.0;
  double fit_radius = 0.0;
  double fit_x0 = 0.0;
  double stationarity = 0.0;  // max |H^alpha - phi|
  double max_H_minus_q = 0.0;
  double minkowski_lhs = 0.0;
  double minkowski_rhs = 0.0;
  double volume_drift = 0.0;  // relative to the first snapshot
  double W_drift = 0.0;
  RadialGraph graph;

  bool has_radii() const;
};

enum class Verdict { Converged, TimedOut, Aborted };

std::string_view to_string(Verdict v);

struct TimeSeries {
  FlowConfig config;
  std::vector<Snapshot> snapshots;
  Verdict verdict = Verdict::TimedOut;
  std::string abort_reason;
  double wall_seconds = 0.0;
  long steps = 0;
  // Largest single-step relative drop in volume, and largest single-step
  // relative change of the variant's conserved quantity.
  double max_step_volume_decrease = 0.0;
  double max_step_conserved_change = 0.0;
};

struct RunResult {
  TimeSeries series;
  FlowState final_state;
  Verdict verdict = Verdict::TimedOut;
};

struct Check {
  std::string name;
  bool passed = false;
  double margin = 0.0;  // slack left against the threshold; negative on failure
  std::optional<double> first_violation_t;
  std::string detail;
};

struct SuiteReport {
  std::vector<Check> checks;

  bool passed() const;
  const Check* find(std::string_view name) const;
  /// Ordered key=value lines.
  std::string serialize() const;
};

struct ConvergenceReport {
  SphericalCap fitted;
  double residual = 0.0;
  double predicted_radius = 0.0;
  double radius_error = 0.0;  // relative
  double final_stationarity = 0.0;
  double final_max_H_minus_q = 0.0;

  std::string serialize() const;
};

namespace diagnostics {

Snapshot snapshot(const FlowState& state, const FlowConfig& config, bool with_radii);

/// Integrates until max|H^alpha - phi| < conv_tol, t >= t_max or a guard fires.
RunResult run(const FlowConfig& config);

/// Qualitative checks over a completed series; a pure function of its inputs.
SuiteReport assert_suite(const TimeSeries& series, const FlowConfig& config);

/// Throws Error(NotConverged) unless the series converged.
ConvergenceReport convergence_report(const FlowState& final_state, const TimeSeries& series,
                                     const FlowConfig& config);

/// Radius of the enclosure cap used by the position estimate:
///   R* = (1 + 2 sin(theta) / (1 - cos(theta))) R.
double enclosure_radius(double theta, double R);

}  // namespace diagnostics
}  // namespace capflow
