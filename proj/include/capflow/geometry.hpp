#pragma once

// Discrete calculus for hypersurfaces written as radial graphs over the upper
// half-sphere. Two instantiations share one code path:
//
//   Planar        n = 1, curve in the half-plane, phi in [0, pi] measured from
//                 the floor; both endpoints lie on the floor.
//   Axisymmetric  n = 2, surface of revolution, phi in [0, pi/2] measured from
//                 the vertical axis; phi = 0 is the pole, phi = pi/2 the floor.
//
// Orientation: outward unit normal, so a convex body has positive curvatures
// and the unit cap has H = n.

#include <optional>
#include <span>
#include <vector>

namespace capflow {

inline constexpr double kPi = 3.14159265358979323846;

enum class DimensionMode { Planar, Axisymmetric };

/// Hypersurface dimension n.
constexpr int dimension(DimensionMode mode) {
  return mode == DimensionMode::Planar ? 1 : 2;
}

constexpr double angular_span(DimensionMode mode) {
  return mode == DimensionMode::Planar ? kPi : kPi / 2;
}

/// Star-shaped body given by rho(phi) on a uniform grid that includes both
/// endpoints. `center` is the floor coordinate of the star center (Planar
/// only; the axis foot is the center for Axisymmetric bodies).
struct RadialGraph {
  DimensionMode mode = DimensionMode::Planar;
  double theta = kPi / 2;
  std::vector<double> rho;
  double center = 0.0;

  int size() const { return static_cast<int>(rho.size()); }
  double spacing() const { return angular_span(mode) / (size() - 1); }
  double angle(int i) const { return i * spacing(); }
  std::vector<double> angles() const;
};

/// Virtual values rho(-dphi) and rho(span + dphi) used by the centered
/// stencils at the two endpoints.
struct Ghosts {
  double left = 0.0;
  double right = 0.0;
};

struct Derivatives {
  std::vector<double> d1;
  std::vector<double> d2;
};

struct NodalFields {
  std::vector<double> rho_d1;
  std::vector<double> rho_d2;
  std::vector<double> nuE;
  std::vector<double> H;
  std::vector<double> kappa_profile;
  std::vector<double> kappa_azimuthal;  // empty for Planar
  std::vector<double> area_elem;        // dA/dphi
  std::vector<double> u;
  std::vector<double> ubar;

  double min_kappa() const;
};

struct CurvatureField {
  std::vector<double> H;
  std::vector<double> kappa_profile;
  std::vector<double> kappa_azimuthal;
};

struct Integrals {
  double area = 0.0;
  double wetted = 0.0;
  double volume = 0.0;
};

/// Capillary area evaluated by |S| - cos(theta)|wetted| and by quadrature of
/// (1 - cos(theta) <nu,E>) dA.
struct CapillaryArea {
  double via_boundary = 0.0;
  double via_integrand = 0.0;
};

struct SupportFunctions {
  std::vector<double> u;
  std::vector<double> ubar;
};

namespace geometry {

/// Second-order differences. Without ghosts the endpoints use one-sided
/// three/four-point stencils; with ghosts they use the centered stencil.
Derivatives derivatives(const RadialGraph& g, const std::optional<Ghosts>& ghosts = std::nullopt);

std::vector<double> nu_dot_E(const RadialGraph& g, const Derivatives& d);

CurvatureField mean_curvature(const RadialGraph& g, const Derivatives& d);

std::vector<double> area_element(const RadialGraph& g, std::span<const double> rho_d1);

/// Composite Simpson weights on the node grid (node count must be odd).
std::vector<double> simpson_weights(int n, double h);

double integrate(std::span<const double> weights, std::span<const double> values);

/// sin/cos of the node angles and Simpson weights for a grid shape, computed
/// once per thread. `weights` is empty when Simpson does not apply.
struct GridTables {
  std::vector<double> sin;
  std::vector<double> cos;
  std::vector<double> weights;
};
const GridTables& grid_tables(DimensionMode mode, int n);

/// Populates every per-node field; u and ubar are taken about the star center.
NodalFields evaluate(const RadialGraph& g, const std::optional<Ghosts>& ghosts = std::nullopt);

Integrals integrals(const RadialGraph& g, const NodalFields& f);

CapillaryArea capillary_area(const RadialGraph& g, const NodalFields& f);

/// W^{n+1} / V^n.
double iso_ratio(double w_theta, double volume, int n);

/// Support function about the floor point z (horizontal coordinate; must be 0
/// for Axisymmetric graphs) and its capillary version u / (1 - cos(theta) nuE).
SupportFunctions support_functions(const RadialGraph& g, const NodalFields& f, double z);

/// Largest |nuE - cos(theta)| over the floor endpoints.
double contact_residual(const RadialGraph& g, const NodalFields& f);

/// Node positions in the plane of the graph: (x, y) for Planar, (s, z) for the
/// meridian profile of an Axisymmetric surface.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
std::vector<Point2> node_positions(const RadialGraph& g);

/// Integral of H (1 - cos(theta) nuE) dA.
double weighted_mean_curvature_integral(const RadialGraph& g, const NodalFields& f);

}  // namespace geometry
}  // namespace capflow
