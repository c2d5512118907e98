#pragma once

#include "capflow/geometry.hpp"

namespace capflow {

/// C_{r,theta}(x0): sphere of radius r centered at x0 - r cos(theta) E, cut by
/// the floor. x0 is a horizontal floor coordinate (0 for Axisymmetric).
struct SphericalCap {
  double x0 = 0.0;
  double r = 1.0;
  double theta = kPi / 2;

  /// Height of the ball center (negative for theta < pi/2).
  double center_height() const;
  /// True if p lies in the closed ball; for Axisymmetric bodies p is a
  /// meridian point (s, z).
  bool ball_contains(geometry::Point2 p, double slack = 0.0) const;
};

struct CapQuantities {
  double area = 0.0;
  double wetted = 0.0;
  double volume = 0.0;
  double W_theta = 0.0;
  double I_theta = 0.0;
  double H = 0.0;
  double c_n_theta = 0.0;
};

enum class ConstraintKind { Volume, CapillaryArea };

struct CapillaryRadii {
  double rho_minus = 0.0;
  double rho_plus = 0.0;
  double x0_minus = 0.0;
  double x0_plus = 0.0;
};

struct CapFit {
  SphericalCap cap;
  double residual = 0.0;
};

struct MinkowskiSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

namespace caps {

/// Closed-form polar graph of the cap about its own floor point x0.
RadialGraph cap_profile(const SphericalCap& cap, DimensionMode mode, int nodes);

/// rho(phi) of the cap about x0 for the vertical direction component v.
double profile_radius(double r, double theta, double v);

CapQuantities cap_quantities(int n, double theta, double r);

double radius_from_constraint(int n, double theta, double target, ConstraintKind kind);

/// Point-in-body test against the radial graph. Between nodes rho is
/// interpolated by a local cubic through four neighbouring nodes.
bool contains_point(const RadialGraph& g, geometry::Point2 p);

CapillaryRadii capillary_radii(const RadialGraph& g);

CapFit fit_cap(const RadialGraph& g);

MinkowskiSides minkowski_check(const RadialGraph& g, const NodalFields& f);

}  // namespace caps
}  // namespace capflow
