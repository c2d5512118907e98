#pragma once

// Explicit integration of  d/dt X = (phi(t) - H^alpha)(nu - cos(theta) E)
// written as a scalar equation for the radial graph rho(phi, t).

#include <span>
#include <string>
#include <vector>

#include "capflow/caps.hpp"
#include "capflow/geometry.hpp"

namespace capflow {

enum class Variant { VolumePreserving, AreaPreserving };

/// rho <- rho (1 + amplitude * cos(k pi phi / span)); the cosine has zero
/// slope at both ends so the contact-angle relation is preserved.
struct PerturbationMode {
  int k = 1;
  double amplitude = 0.0;
};

struct FlowConfig {
  DimensionMode mode = DimensionMode::Planar;
  double alpha = 1.0;
  double theta = kPi / 3;
  Variant variant = Variant::VolumePreserving;
  int N = 201;
  double cfl_safety = 0.2;
  double t_max = 50.0;
  double conv_tol = 1e-4;
  double drift_tol = 1e-4;
  int snapshot_stride = 200;
  double H_floor = 1e-6;
  int radii_stride = 10;
  double initial_radius = 1.0;
  std::vector<PerturbationMode> perturbations;
  std::string out_dir = "capflow_out";
  // Allows theta > pi/2; such runs are outside the convergence theory.
  bool allow_unsupported_theta = false;
  // Rescales along the normal after each step to hold the constraint fixed.
  bool project_constraint = false;

  /// Throws Error(ValidationError) naming the violated invariant.
  void validate() const;
};

struct FlowState {
  double t = 0.0;
  RadialGraph graph;
  NodalFields fields;
  double phi = 0.0;
  long step_count = 0;
};

std::string_view to_string(Variant v);

namespace flow {

/// Ghost values realising the contact-angle condition as a Robin relation:
///   Planar        rho'(0) = -rho cot(theta),  rho'(pi) = +rho cot(theta)
///   Axisymmetric  rho'(0) = 0 (pole),         rho'(pi/2) = +rho cot(theta)
Ghosts apply_boundary_conditions(const RadialGraph& g);

/// geometry::evaluate with the boundary ghosts applied.
NodalFields evaluate_fields(const RadialGraph& g);

double perturbation_shape(int k, double phi, DimensionMode mode);

/// The cap of the discrete scheme: starting from the closed-form profile,
/// Newton-solves H_i = const at fixed quadrature volume. The result is a
/// stationary point of the discrete flow.
RadialGraph discrete_cap(const SphericalCap& cap, DimensionMode mode, int nodes);

FlowState initial_data(const FlowConfig& config);

double nonlocal_phi(const RadialGraph& g, const NodalFields& f, Variant variant, double alpha);

/// Weighted mean of H with weight (1 - cos(theta) nuE) dA.
double q_value(const RadialGraph& g, const NodalFields& f);

std::vector<double> normal_speed(const RadialGraph& g, const NodalFields& f, double phi, double alpha);

/// d rho / dt = F sqrt(rho^2 + rho'^2) / rho.
std::vector<double> graph_velocity(const RadialGraph& g, const NodalFields& f, std::span<const double> F);

double stable_dt(const FlowState& state, const FlowConfig& config);

/// max_i |H_i^alpha - phi|.
double stationarity_residual(const FlowState& state, double alpha);

/// One Heun step with phi and the ghosts recomputed at each stage. Throws
/// FlowAborted when a guard fires.
FlowState step(const FlowState& state, const FlowConfig& config);

/// Quantity held fixed by the variant: volume or capillary area.
double conserved_quantity(const RadialGraph& g, const NodalFields& f, Variant variant);

/// Moves the graph by a uniform normal offset so that the variant's
/// conserved quantity equals `target` (secant root find).
FlowState project_onto_constraint(const FlowState& state, const FlowConfig& config, double target);

}  // namespace flow
}  // namespace capflow
