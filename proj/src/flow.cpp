#include "capflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "capflow/error.hpp"

namespace capflow {

std::string_view to_string(Variant v) {
  return v == Variant::VolumePreserving ? "volume" : "area";
}

void FlowConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (!(alpha > 0)) fail("alpha > 0 required");
  if (!(theta > 0)) fail("theta > 0 required");
  if (!(theta < kPi)) fail("theta < pi required");
  if (theta > kPi / 2 + 1e-12 && !allow_unsupported_theta)
    fail("theta in (0, pi/2] required (pass --force for unsupported angles)");
  if (N < 41) fail("N >= 41 required");
  if (N % 2 == 0) fail("N must be odd");
  if (!(cfl_safety > 0)) fail("cfl_safety > 0 required");
  if (!(t_max > 0)) fail("t_max > 0 required");
  if (!(conv_tol > 0)) fail("conv_tol > 0 required");
  if (!(drift_tol > 0)) fail("drift_tol > 0 required");
  if (snapshot_stride < 1) fail("snapshot_stride >= 1 required");
  if (radii_stride < 1) fail("radii_stride >= 1 required");
  if (!(H_floor >= 0)) fail("H_floor >= 0 required");
  if (!(initial_radius > 0)) fail("initial radius > 0 required");
  for (const auto& p : perturbations)
    if (p.k < 0) fail("perturbation mode index must be non-negative");
}

namespace flow {

namespace {

double cot(double theta) { return std::cos(theta) / std::sin(theta); }

// Solves a tridiagonal system in place (Thomas algorithm).
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

std::vector<double> volume_gradient(const RadialGraph& g) {
  const auto w = geometry::simpson_weights(g.size(), g.spacing());
  const auto& tab = geometry::grid_tables(g.mode, g.size());
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i)
    v[i] = g.mode == DimensionMode::Planar ? w[i] * g.rho[i]
                                           : 2 * kPi * w[i] * g.rho[i] * g.rho[i] * tab.sin[i];
  return v;
}

double volume_of(const RadialGraph& g) {
  return geometry::integrals(g, evaluate_fields(g)).volume;
}

[[noreturn]] void abort_run(ErrorKind kind, const std::string& what, int node, double t) {
  throw FlowAborted(kind, what + " at node " + std::to_string(node) + ", t = " + std::to_string(t), node, t);
}

// Velocity of the graph for the current rho, with phi recomputed from it.
std::vector<double> velocity(const RadialGraph& g, const NodalFields& f, const FlowConfig& cfg) {
  const double phi = nonlocal_phi(g, f, cfg.variant, cfg.alpha);
  const auto F = normal_speed(g, f, phi, cfg.alpha);
  return graph_velocity(g, f, F);
}

NodalFields guarded_fields(const RadialGraph& g, const FlowConfig& cfg, double t, bool final_stage) {
  for (int i = 0; i < g.size(); ++i)
    if (!(g.rho[i] > 0)) abort_run(ErrorKind::NonPositiveRho, "rho <= 0", i, t);
  auto f = evaluate_fields(g);
  for (int i = 0; i < g.size(); ++i)
    if (!(f.H[i] > cfg.H_floor)) abort_run(ErrorKind::CurvatureFloorHit, "H <= H_floor", i, t);
  if (final_stage) {
    const int n = g.size();
    for (int i = 0; i < n; ++i) {
      const bool ok = f.kappa_profile[i] > 0 && (f.kappa_azimuthal.empty() || f.kappa_azimuthal[i] > 0);
      if (!ok) abort_run(ErrorKind::ConvexityLost, "principal curvature <= 0", i, t);
    }
    if (!(geometry::contact_residual(g, f) < 1e-8))
      abort_run(ErrorKind::ContactAngleLost, "contact-angle residual above 1e-8", n - 1, t);
  }
  return f;
}

}  // namespace

Ghosts apply_boundary_conditions(const RadialGraph& g) {
  const int n = g.size();
  const double h = g.spacing();
  const double ct = cot(g.theta);
  Ghosts gh;
  if (g.mode == DimensionMode::Planar)
    gh.left = g.rho[1] + 2 * h * ct * g.rho[0];
  else
    gh.left = g.rho[1];
  gh.right = g.rho[n - 2] + 2 * h * ct * g.rho[n - 1];
  return gh;
}

NodalFields evaluate_fields(const RadialGraph& g) {
  return geometry::evaluate(g, apply_boundary_conditions(g));
}

double perturbation_shape(int k, double phi, DimensionMode mode) {
  return std::cos(k * kPi * phi / angular_span(mode));
}

RadialGraph discrete_cap(const SphericalCap& cap, DimensionMode mode, int nodes) {
  RadialGraph g = caps::cap_profile(cap, mode, nodes);
  const int n = g.size();
  const double target = volume_of(g);

  for (int iter = 0; iter < 50; ++iter) {
    const auto f = evaluate_fields(g);
    double lambda = 0.0;
    for (double h : f.H) lambda += h;
    lambda /= n;
    double res = 0.0;
    for (double h : f.H) res = std::max(res, std::abs(h - lambda));
    const double vol_err = volume_of(g) - target;
    if (res <= 1e-13 * lambda && std::abs(vol_err) <= 1e-14 * target) break;

    // Tridiagonal Jacobian of H by three-colour central differences.
    std::vector<double> lower(n), diag(n), upper(n);
    for (int color = 0; color < 3; ++color) {
      RadialGraph plus = g;
      RadialGraph minus = g;
      std::vector<double> delta(n, 0.0);
      for (int j = color; j < n; j += 3) {
        delta[j] = 1e-7 * g.rho[j];
        plus.rho[j] += delta[j];
        minus.rho[j] -= delta[j];
      }
      const auto hp = evaluate_fields(plus).H;
      const auto hm = evaluate_fields(minus).H;
      for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
          if (j % 3 != color) continue;
          const double d = (hp[i] - hm[i]) / (2 * delta[j]);
          if (j == i - 1) lower[i] = d;
          else if (j == i) diag[i] = d;
          else upper[i] = d;
        }
      }
    }

    // Bordered system [J -1; v^T 0][drho; dlambda] = -[H - lambda; V - V*].
    std::vector<double> minus_r(n);
    for (int i = 0; i < n; ++i) minus_r[i] = -(f.H[i] - lambda);
    const auto x = solve_tridiagonal(lower, diag, upper, minus_r);
    const auto y = solve_tridiagonal(lower, diag, upper, std::vector<double>(n, 1.0));
    const auto v = volume_gradient(g);
    double vx = 0.0;
    double vy = 0.0;
    for (int i = 0; i < n; ++i) {
      vx += v[i] * x[i];
      vy += v[i] * y[i];
    }
    const double dlambda = (-vol_err - vx) / vy;
    for (int i = 0; i < n; ++i) g.rho[i] += x[i] + dlambda * y[i];
  }
  return g;
}

FlowState initial_data(const FlowConfig& config) {
  config.validate();
  auto invalid = [](const std::string& what) { throw Error(ErrorKind::InvalidInitialData, what); };

  FlowState s;
  s.graph = discrete_cap({0.0, config.initial_radius, config.theta}, config.mode, config.N);
  for (int i = 0; i < s.graph.size(); ++i) {
    double factor = 1.0;
    for (const auto& p : config.perturbations)
      factor += p.amplitude * perturbation_shape(p.k, s.graph.angle(i), config.mode);
    s.graph.rho[i] *= factor;
    if (!(s.graph.rho[i] > 0)) invalid("rho > 0 violated at node " + std::to_string(i));
  }

  s.fields = evaluate_fields(s.graph);
  if (!(s.fields.min_kappa() > 0)) invalid("strict convexity (min kappa > 0) violated");
  for (double h : s.fields.H)
    if (!(h > config.H_floor)) invalid("H > H_floor violated");
  if (!(geometry::contact_residual(s.graph, s.fields) < 1e-10)) invalid("contact-angle residual above 1e-10");
  for (double u : s.fields.u)
    if (!(u > 0)) invalid("star-shapedness (u > 0) violated");
  s.phi = nonlocal_phi(s.graph, s.fields, config.variant, config.alpha);
  return s;
}

double nonlocal_phi(const RadialGraph& g, const NodalFields& f, Variant variant, double alpha) {
  const int n = g.size();
  const double c = std::cos(g.theta);
  const auto& w = geometry::grid_tables(g.mode, n).weights;
  if (w.empty()) geometry::simpson_weights(n, g.spacing());
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(f.H[i] > 0)) throw Error(ErrorKind::NonPositiveH, "H <= 0 at node " + std::to_string(i));
    const double weight = w[i] * (1.0 - c * f.nuE[i]) * f.area_elem[i];
    const double ha = alpha == 1.0 ? f.H[i] : std::pow(f.H[i], alpha);
    if (variant == Variant::VolumePreserving) {
      num += weight * ha;
      den += weight;
    } else {
      num += weight * ha * f.H[i];
      den += weight * f.H[i];
    }
  }
  return num / den;
}

double q_value(const RadialGraph& g, const NodalFields& f) {
  return nonlocal_phi(g, f, Variant::VolumePreserving, 1.0);
}

std::vector<double> normal_speed(const RadialGraph& g, const NodalFields& f, double phi, double alpha) {
  const double c = std::cos(g.theta);
  std::vector<double> F(g.rho.size());
  for (int i = 0; i < g.size(); ++i) {
    const double ha = alpha == 1.0 ? f.H[i] : std::pow(f.H[i], alpha);
    F[i] = (phi - ha) * (1.0 - c * f.nuE[i]);
  }
  return F;
}

std::vector<double> graph_velocity(const RadialGraph& g, const NodalFields& f, std::span<const double> F) {
  std::vector<double> v(g.rho.size());
  for (int i = 0; i < g.size(); ++i) v[i] = F[i] * std::hypot(g.rho[i], f.rho_d1[i]) / g.rho[i];
  return v;
}

double stable_dt(const FlowState& state, const FlowConfig& config) {
  const auto& g = state.graph;
  const auto& f = state.fields;
  const double c = std::cos(g.theta);
  const double h = g.spacing();
  // Linearising H^alpha in rho'' gives the diffusivity
  //   D = alpha (1 - cos(theta) nuE) H^(alpha-1) / (rho^2 + rho'^2);
  // at the pole both principal curvatures carry rho'' so D doubles there.
  // Heun on u_t = D u_xx is stable for D dt / h^2 <= 1/2.
  double dmax = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double l2 = g.rho[i] * g.rho[i] + f.rho_d1[i] * f.rho_d1[i];
    double d = config.alpha * (1.0 - c * f.nuE[i]) * std::pow(f.H[i], config.alpha - 1.0) / l2;
    if (g.mode == DimensionMode::Axisymmetric && i == 0) d *= 2;
    dmax = std::max(dmax, d);
  }
  return config.cfl_safety * h * h / dmax;
}

double stationarity_residual(const FlowState& state, double alpha) {
  double r = 0.0;
  for (double h : state.fields.H) r = std::max(r, std::abs(std::pow(h, alpha) - state.phi));
  return r;
}

FlowState step(const FlowState& state, const FlowConfig& config) {
  const double dt = stable_dt(state, config);
  const auto& g0 = state.graph;
  const int n = g0.size();

  const auto k1 = velocity(g0, state.fields, config);
  RadialGraph g1 = g0;
  for (int i = 0; i < n; ++i) g1.rho[i] += dt * k1[i];
  const auto f1 = guarded_fields(g1, config, state.t + dt, false);

  const auto k2 = velocity(g1, f1, config);
  FlowState next;
  next.graph = g0;
  for (int i = 0; i < n; ++i) next.graph.rho[i] += 0.5 * dt * (k1[i] + k2[i]);
  next.t = state.t + dt;
  next.step_count = state.step_count + 1;
  next.fields = guarded_fields(next.graph, config, next.t, true);
  next.phi = nonlocal_phi(next.graph, next.fields, config.variant, config.alpha);
  return next;
}

double conserved_quantity(const RadialGraph& g, const NodalFields& f, Variant variant) {
  return variant == Variant::VolumePreserving ? geometry::integrals(g, f).volume
                                              : geometry::capillary_area(g, f).via_boundary;
}

FlowState project_onto_constraint(const FlowState& state, const FlowConfig& config, double target) {
  const auto& g = state.graph;
  std::vector<double> direction(g.rho.size());
  for (int i = 0; i < g.size(); ++i)
    direction[i] = std::hypot(g.rho[i], state.fields.rho_d1[i]) / g.rho[i];

  auto shifted = [&](double offset) {
    RadialGraph out = g;
    for (int i = 0; i < g.size(); ++i) out.rho[i] += offset * direction[i];
    return out;
  };
  auto defect = [&](double offset) {
    const auto s = shifted(offset);
    return conserved_quantity(s, evaluate_fields(s), config.variant) - target;
  };

  double a = 0.0;
  double fa = defect(a);
  double b = 1e-6 * config.initial_radius;
  double fb = defect(b);
  for (int it = 0; it < 30 && std::abs(fb) > 1e-15 * target && fb != fa; ++it) {
    const double next = b - fb * (b - a) / (fb - fa);
    a = b;
    fa = fb;
    b = next;
    fb = defect(b);
  }
  FlowState out = state;
  out.graph = shifted(b);
  out.fields = evaluate_fields(out.graph);
  out.phi = nonlocal_phi(out.graph, out.fields, config.variant, config.alpha);
  return out;
}

}  // namespace flow
}  // namespace capflow
