#include "capflow/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "capflow/error.hpp"
#include "capflow/format.hpp"

namespace capflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerances pinned at N = 400 intervals and scaled with the second-order
// discretisation error for other grids.
double second_order_tolerance(double at_400, int nodes) {
  const double ratio = 400.0 / (nodes - 1);
  return at_400 * std::max(1.0, ratio * ratio);
}

}  // namespace

bool Snapshot::has_radii() const { return !std::isnan(rho_minus) && !std::isnan(rho_plus); }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::TimedOut: return "TimedOut";
    case Verdict::Aborted: return "Aborted";
  }
  return "Unknown";
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* SuiteReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string SuiteReport::serialize() const {
  std::ostringstream os;
  const auto n_pass = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  os << "suite=capflow-assert-suite v1\n";
  os << "checks=" << checks.size() << "\n";
  os << "passed=" << n_pass << "\n";
  os << "result=" << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : checks) {
    os << "check." << c.name << "=" << (c.passed ? "PASS" : "FAIL") << "\n";
    os << "check." << c.name << ".margin=" << format_double(c.margin) << "\n";
    os << "check." << c.name << ".first_violation_t="
       << (c.first_violation_t ? format_double(*c.first_violation_t) : std::string("none")) << "\n";
    if (!c.detail.empty()) os << "check." << c.name << ".detail=" << c.detail << "\n";
  }
  return os.str();
}

std::string ConvergenceReport::serialize() const {
  std::ostringstream os;
  os << "# smooth convergence is not machine-checkable; assessed by cap-fit residual and max|H^alpha - phi|\n";
  os << "fit.x0=" << format_double(fitted.x0) << "\n";
  os << "fit.r=" << format_double(fitted.r) << "\n";
  os << "fit.theta=" << format_double(fitted.theta) << "\n";
  os << "fit.residual=" << format_double(residual) << "\n";
  os << "predicted_radius=" << format_double(predicted_radius) << "\n";
  os << "radius_error=" << format_double(radius_error) << "\n";
  os << "final.max_abs_H_alpha_minus_phi=" << format_double(final_stationarity) << "\n";
  os << "final.max_abs_H_minus_q=" << format_double(final_max_H_minus_q) << "\n";
  return os.str();
}

namespace diagnostics {

namespace {

double predicted_radius(const TimeSeries& series, const FlowConfig& config) {
  const auto& first = series.snapshots.front();
  const int n = dimension(config.mode);
  return config.variant == Variant::VolumePreserving
             ? caps::radius_from_constraint(n, config.theta, first.volume, ConstraintKind::Volume)
             : caps::radius_from_constraint(n, config.theta, first.W_theta, ConstraintKind::CapillaryArea);
}

// Accumulates a per-snapshot inequality "value <= limit".
class Envelope {
 public:
  Envelope(std::string name, std::string detail) : check_{std::move(name), true, kInf, std::nullopt, std::move(detail)} {}

  void observe(double t, double slack) {
    if (std::isnan(slack)) slack = -kInf;
    check_.margin = std::min(check_.margin, slack);
    if (slack < 0 && check_.passed) {
      check_.passed = false;
      check_.first_violation_t = t;
    }
  }

  Check finish() {
    if (check_.margin == kInf) check_.margin = 0.0;
    return check_;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  Check check_;
};

}  // namespace

double enclosure_radius(double theta, double R) {
  return (1.0 + 2.0 * std::sin(theta) / (1.0 - std::cos(theta))) * R;
}

Snapshot snapshot(const FlowState& state, const FlowConfig& config, bool with_radii) {
  const auto& g = state.graph;
  const auto& f = state.fields;
  const int n = dimension(g.mode);
  Snapshot s;
  s.t = state.t;
  s.step = state.step_count;
  const auto I = geometry::integrals(g, f);
  const auto W = geometry::capillary_area(g, f);
  s.area = I.area;
  s.wetted = I.wetted;
  s.volume = I.volume;
  s.W_theta = W.via_boundary;
  s.W_theta_integrand = W.via_integrand;
  s.I_theta = geometry::iso_ratio(W.via_boundary, I.volume, n);
  s.phi = state.phi;
  s.q = flow::q_value(g, f);
  s.H_min = *std::min_element(f.H.begin(), f.H.end());
  s.H_max = *std::max_element(f.H.begin(), f.H.end());
  s.kappa_min = f.min_kappa();
  s.contact_residual = geometry::contact_residual(g, f);
  s.ubar_min = *std::min_element(f.ubar.begin(), f.ubar.end());
  if (with_radii) {
    const auto radii = caps::capillary_radii(g);
    s.rho_minus = radii.rho_minus;
    s.rho_plus = radii.rho_plus;
  } else {
    s.rho_minus = kNaN;
    s.rho_plus = kNaN;
  }
  const auto fit = caps::fit_cap(g);
  s.fit_residual = fit.residual;
  s.fit_radius = fit.cap.r;
  s.fit_x0 = fit.cap.x0;
  s.stationarity = flow::stationarity_residual(state, config.alpha);
  for (double h : f.H) s.max_H_minus_q = std::max(s.max_H_minus_q, std::abs(h - s.q));
  const auto mk = caps::minkowski_check(g, f);
  s.minkowski_lhs = mk.lhs;
  s.minkowski_rhs = mk.rhs;
  s.graph = g;
  return s;
}

RunResult run(const FlowConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  TimeSeries& series = out.series;
  series.config = config;

  FlowState state = flow::initial_data(config);
  const double conserved0 = flow::conserved_quantity(state.graph, state.fields, config.variant);
  series.snapshots.push_back(snapshot(state, config, true));
  double volume_prev = series.snapshots.back().volume;
  double conserved_prev = conserved0;
  long recorded = 1;

  // At least one step is taken so that even a stationary start yields a
  // series spanning a time interval.
  while (true) {
    if (state.step_count > 0 && flow::stationarity_residual(state, config.alpha) < config.conv_tol) {
      series.verdict = Verdict::Converged;
      break;
    }
    if (state.t >= config.t_max) {
      series.verdict = Verdict::TimedOut;
      break;
    }
    FlowState next;
    try {
      next = flow::step(state, config);
      if (config.project_constraint) next = flow::project_onto_constraint(next, config, conserved0);
    } catch (const FlowAborted& e) {
      series.verdict = Verdict::Aborted;
      series.abort_reason = e.what();
      break;
    }
    state = std::move(next);

    const double volume = geometry::integrals(state.graph, state.fields).volume;
    const double conserved = flow::conserved_quantity(state.graph, state.fields, config.variant);
    series.max_step_volume_decrease = std::max(series.max_step_volume_decrease, (volume_prev - volume) / volume_prev);
    series.max_step_conserved_change =
        std::max(series.max_step_conserved_change, std::abs(conserved - conserved_prev) / conserved0);
    volume_prev = volume;
    conserved_prev = conserved;

    if (state.step_count % config.snapshot_stride == 0) {
      series.snapshots.push_back(snapshot(state, config, recorded % config.radii_stride == 0));
      ++recorded;
    }
  }

  if (series.snapshots.back().step != state.step_count) {
    series.snapshots.push_back(snapshot(state, config, true));
  } else if (!series.snapshots.back().has_radii()) {
    const auto radii = caps::capillary_radii(state.graph);
    series.snapshots.back().rho_minus = radii.rho_minus;
    series.snapshots.back().rho_plus = radii.rho_plus;
  }

  const auto& first = series.snapshots.front();
  for (auto& s : series.snapshots) {
    s.volume_drift = (s.volume - first.volume) / first.volume;
    s.W_drift = (s.W_theta - first.W_theta) / first.W_theta;
  }
  series.steps = state.step_count;
  series.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.verdict = series.verdict;
  out.final_state = std::move(state);
  return out;
}

SuiteReport assert_suite(const TimeSeries& series, const FlowConfig& config) {
  SuiteReport report;
  if (series.snapshots.empty()) {
    report.checks.push_back({"run_converged", false, -1.0, std::nullopt, "empty series"});
    return report;
  }
  const auto& snaps = series.snapshots;
  const auto& first = snaps.front();
  const auto& last = snaps.back();
  const int n = dimension(config.mode);
  const bool converged = series.verdict == Verdict::Converged;
  const double r_pred = predicted_radius(series, config);
  const auto cap = caps::cap_quantities(n, config.theta, 1.0);
  const int nodes = first.graph.size();

  {
    Check c{"run_converged", converged, config.conv_tol - last.stationarity, std::nullopt,
            std::string(to_string(series.verdict))};
    if (!series.abort_reason.empty()) c.detail += ": " + series.abort_reason;
    if (!converged) {
      c.margin = std::min(c.margin, -1.0);
      c.first_violation_t = last.t;
    }
    report.checks.push_back(c);
  }

  {
    const bool by_volume = config.variant == Variant::VolumePreserving;
    Envelope e("conservation", by_volume ? "relative volume drift" : "relative capillary-area drift");
    for (const auto& s : snaps) e.observe(s.t, config.drift_tol - std::abs(by_volume ? s.volume_drift : s.W_drift));
    report.checks.push_back(e.finish());
  }

  if (config.variant == Variant::AreaPreserving) {
    Check c{"volume_monotone", series.max_step_volume_decrease <= 1e-8, 1e-8 - series.max_step_volume_decrease,
            std::nullopt, "largest single-step relative volume decrease"};
    if (!c.passed) c.first_violation_t = last.t;
    report.checks.push_back(c);
  }

  {
    Envelope e("iso_monotone", "I_theta non-increasing between snapshots (1e-8 relative)");
    for (size_t k = 1; k < snaps.size(); ++k)
      e.observe(snaps[k].t, snaps[k - 1].I_theta * (1 + 1e-8) - snaps[k].I_theta);
    report.checks.push_back(e.finish());
  }

  {
    Envelope e("iso_floor", "I_theta >= I_theta(cap) - 1e-6");
    for (const auto& s : snaps) e.observe(s.t, s.I_theta - (cap.I_theta - 1e-6));
    report.checks.push_back(e.finish());
  }

  if (converged) {
    Envelope e("iso_limit", "final I_theta within 1e-3 relative of the cap value");
    e.observe(last.t, 1e-3 - std::abs(last.I_theta - cap.I_theta) / cap.I_theta);
    report.checks.push_back(e.finish());
  }

  {
    const double tol = second_order_tolerance(1e-6, nodes);
    Envelope e("w_identity", "|W_A - W_B| <= " + format_double(tol) + " W");
    for (const auto& s : snaps) e.observe(s.t, tol * s.W_theta - std::abs(s.W_theta - s.W_theta_integrand));
    report.checks.push_back(e.finish());
  }

  {
    Envelope e("convexity", "min kappa > 0");
    for (const auto& s : snaps) e.observe(s.t, s.kappa_min);
    report.checks.push_back(e.finish());
  }

  {
    Envelope e("contact_angle", "|nuE - cos(theta)| < 1e-8 on the boundary");
    for (const auto& s : snaps) e.observe(s.t, 1e-8 - s.contact_residual);
    report.checks.push_back(e.finish());
  }

  {
    const double steady = std::pow(n / r_pred, config.alpha);
    Envelope e("phi_bounds", "phi in [steady/2, 2 steady], steady = " + format_double(steady));
    for (const auto& s : snaps) e.observe(s.t, std::min(s.phi - 0.5 * steady, 2 * steady - s.phi));
    report.checks.push_back(e.finish());
  }

  {
    const double steady_H = n / r_pred;
    const double upper = 1.05 * std::max(first.H_max, steady_H);
    const double lower = 0.5 * steady_H;
    Envelope e("H_bounds", "H in [" + format_double(lower) + ", " + format_double(upper) + "]");
    for (const auto& s : snaps) e.observe(s.t, std::min(s.H_min - lower, upper - s.H_max));
    report.checks.push_back(e.finish());
  }

  {
    Envelope bounds("radii_bounds", "0 < rho_minus <= rho_plus < inf");
    Envelope pinch("pinching", "rho_plus/rho_minus <= 1.05 x initial ratio");
    const double ratio0 = first.rho_plus / first.rho_minus;
    for (const auto& s : snaps) {
      if (!s.has_radii()) continue;
      const double slack = std::min({s.rho_minus, s.rho_plus - s.rho_minus,
                                     std::isfinite(s.rho_plus) ? 1.0 : -1.0});
      bounds.observe(s.t, slack);
      pinch.observe(s.t, 1.05 * ratio0 - s.rho_plus / s.rho_minus);
    }
    report.checks.push_back(bounds.finish());
    report.checks.push_back(pinch.finish());
    if (converged) {
      Envelope lim("pinching_limit", "rho_plus/rho_minus <= 1 + 1e-2 at convergence");
      lim.observe(last.t, 1e-2 - (last.rho_plus / last.rho_minus - 1.0));
      report.checks.push_back(lim.finish());
    }
  }

  {
    const double tol = second_order_tolerance(1e-5, nodes);
    Envelope e("minkowski", "int H(1 - cos(theta) nuE) dA >= c W^((n-1)/n) (relative tol " + format_double(tol) + ")");
    for (const auto& s : snaps) e.observe(s.t, s.minkowski_lhs - s.minkowski_rhs * (1 - tol));
    report.checks.push_back(e.finish());
  }

  {
    const auto radii0 = caps::capillary_radii(first.graph);
    const double R = radii0.rho_plus * (1 + 1e-9);
    const double R_star = enclosure_radius(config.theta, R);
    const SphericalCap enclosing{radii0.x0_plus, R_star, config.theta};
    Envelope e("enclosure", "nodes inside C_{R*,theta}(z*), R* = " + format_double(R_star));
    for (const auto& s : snaps) {
      double slack = std::numeric_limits<double>::infinity();
      for (const auto& p : geometry::node_positions(s.graph))
        slack = std::min(slack, R_star - std::hypot(p.x - enclosing.x0, p.y - enclosing.center_height()));
      e.observe(s.t, slack);
    }
    report.checks.push_back(e.finish());
  }

  if (converged) {
    Envelope e("convergence_target", "fit residual < 1e-3 r and radius within 1e-3 of the prediction");
    const double rel = std::abs(last.fit_radius - r_pred) / r_pred;
    e.observe(last.t, std::min(1e-3 * last.fit_radius - last.fit_residual, 1e-3 - rel));
    report.checks.push_back(e.finish());
  }

  return report;
}

ConvergenceReport convergence_report(const FlowState& final_state, const TimeSeries& series,
                                     const FlowConfig& config) {
  if (series.verdict != Verdict::Converged)
    throw Error(ErrorKind::NotConverged, "run ended with verdict " + std::string(to_string(series.verdict)));
  ConvergenceReport r;
  const auto fit = caps::fit_cap(final_state.graph);
  r.fitted = fit.cap;
  r.residual = fit.residual;
  r.predicted_radius = predicted_radius(series, config);
  r.radius_error = std::abs(fit.cap.r - r.predicted_radius) / r.predicted_radius;
  r.final_stationarity = flow::stationarity_residual(final_state, config.alpha);
  const double q = flow::q_value(final_state.graph, final_state.fields);
  for (double h : final_state.fields.H) r.final_max_H_minus_q = std::max(r.final_max_H_minus_q, std::abs(h - q));
  return r;
}

}  // namespace diagnostics
}  // namespace capflow
