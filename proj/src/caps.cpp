#include "capflow/caps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "capflow/error.hpp"

namespace capflow {

using geometry::Point2;

double SphericalCap::center_height() const { return -r * std::cos(theta); }

bool SphericalCap::ball_contains(Point2 p, double slack) const {
  const double dx = p.x - x0;
  const double dy = p.y - center_height();
  return dx * dx + dy * dy <= (r + slack) * (r + slack);
}

namespace caps {

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Minimizes a unimodal function on [a, b].
template <typename F>
double golden_section_min(F&& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double unit_volume(int n, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return n == 1 ? theta - s * c : kPi * (1 - c) * (1 - c) * (2 + c) / 3;
}

// Samples the spherical part of the cap; for Axisymmetric caps only the
// meridian half (s >= 0) is needed.
std::vector<Point2> cap_arc(const SphericalCap& cap, DimensionMode mode, int samples) {
  std::vector<Point2> pts(samples);
  const double lo = mode == DimensionMode::Planar ? -cap.theta : 0.0;
  const double hi = cap.theta;
  const double zc = cap.center_height();
  for (int k = 0; k < samples; ++k) {
    const double psi = lo + (hi - lo) * k / (samples - 1);
    pts[k] = {cap.x0 + cap.r * std::sin(psi), std::max(0.0, zc + cap.r * std::cos(psi))};
  }
  return pts;
}

double interpolate_rho(const RadialGraph& g, double phi) {
  const int n = g.size();
  const double t = std::clamp(phi / g.spacing(), 0.0, double(n - 1));
  const int i = std::min(static_cast<int>(t), n - 2);
  const int start = std::clamp(i - 1, 0, n - 4);
  const double x = t - start;
  // Lagrange basis on nodes 0..3 of the window.
  const double l0 = -(x - 1) * (x - 2) * (x - 3) / 6;
  const double l1 = x * (x - 2) * (x - 3) / 2;
  const double l2 = -x * (x - 1) * (x - 3) / 2;
  const double l3 = x * (x - 1) * (x - 2) / 6;
  return l0 * g.rho[start] + l1 * g.rho[start + 1] + l2 * g.rho[start + 2] + l3 * g.rho[start + 3];
}

bool cap_inside(const RadialGraph& g, const SphericalCap& cap, int samples) {
  for (const auto& p : cap_arc(cap, g.mode, samples))
    if (!contains_point(g, p)) return false;
  return true;
}

// Smallest radius of a cap at x0 whose ball holds every node; the ball
// inequality is quadratic in r so this is solved exactly.
double enclosing_radius(const std::vector<Point2>& nodes, double x0, double theta) {
  const double c = std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  double r = 0.0;
  for (const auto& p : nodes) {
    const double d2 = (p.x - x0) * (p.x - x0) + p.y * p.y;
    r = std::max(r, (p.y * c + std::sqrt(p.y * p.y * c * c + s2 * d2)) / s2);
  }
  return r;
}

double largest_inner_radius(const RadialGraph& g, double x0, double r_hi, double tol, int samples) {
  double lo = 0.0;
  double hi = r_hi;
  if (cap_inside(g, {x0, hi, g.theta}, samples)) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (cap_inside(g, {x0, mid, g.theta}, samples))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

double profile_radius(double r, double theta, double v) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return r * (-c * v + std::sqrt(c * c * v * v + s * s));
}

RadialGraph cap_profile(const SphericalCap& cap, DimensionMode mode, int nodes) {
  if (!(cap.theta > 0 && cap.theta <= kPi / 2 + 1e-15))
    throw std::invalid_argument("cap angle must lie in (0, pi/2]");
  RadialGraph g;
  g.mode = mode;
  g.theta = cap.theta;
  g.center = mode == DimensionMode::Planar ? cap.x0 : 0.0;
  g.rho.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double phi = g.angle(i);
    const double v = mode == DimensionMode::Planar ? std::sin(phi) : std::cos(phi);
    g.rho[i] = profile_radius(cap.r, cap.theta, v);
  }
  return g;
}

CapQuantities cap_quantities(int n, double theta, double r) {
  if (!(r > 0)) throw Error(ErrorKind::ValidationError, "cap radius must be positive");
  if (n != 1 && n != 2) throw Error(ErrorKind::ValidationError, "dimension must be 1 or 2");
  if (!(theta > 0 && theta <= kPi / 2 + 1e-15))
    throw Error(ErrorKind::ValidationError, "cap angle must lie in (0, pi/2]");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CapQuantities q;
  if (n == 1) {
    q.area = 2 * r * theta;
    q.wetted = 2 * r * s;
    q.volume = r * r * (theta - s * c);
  } else {
    q.area = 2 * kPi * r * r * (1 - c);
    q.wetted = kPi * r * r * s * s;
    q.volume = kPi * r * r * r * (1 - c) * (1 - c) * (2 + c) / 3;
  }
  q.W_theta = q.area - c * q.wetted;
  q.I_theta = std::pow(q.W_theta, n + 1) / std::pow(q.volume, n);
  q.H = n / r;
  q.c_n_theta = n * std::pow(n + 1.0, 1.0 / n) * std::pow(unit_volume(n, theta), 1.0 / n);
  return q;
}

double radius_from_constraint(int n, double theta, double target, ConstraintKind kind) {
  if (!(target > 0)) throw Error(ErrorKind::NonPositiveTarget, "constraint target must be positive");
  const auto unit = cap_quantities(n, theta, 1.0);
  return kind == ConstraintKind::Volume ? std::pow(target / unit.volume, 1.0 / (n + 1))
                                        : std::pow(target / unit.W_theta, 1.0 / n);
}

bool contains_point(const RadialGraph& g, Point2 p) {
  if (p.y < 0) return false;
  double dist;
  double phi;
  if (g.mode == DimensionMode::Planar) {
    const double dx = p.x - g.center;
    dist = std::hypot(dx, p.y);
    phi = std::atan2(p.y, dx);
  } else {
    const double s = std::abs(p.x);
    dist = std::hypot(s, p.y);
    phi = std::atan2(s, p.y);
  }
  if (dist == 0.0) return true;
  return dist <= interpolate_rho(g, phi);
}

CapillaryRadii capillary_radii(const RadialGraph& g) {
  const auto nodes = geometry::node_positions(g);
  double scale = 0.0;
  double xmin = nodes.front().x;
  double xmax = xmin;
  for (const auto& p : nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  for (const auto& a : nodes)
    for (const auto& b : nodes) scale = std::max(scale, std::hypot(a.x - b.x, a.y - b.y));
  if (g.mode == DimensionMode::Axisymmetric) scale = std::max(scale, 2 * xmax);

  const int samples = std::max(4 * g.size(), 400);
  const double tol = 1e-8 * scale;
  const double r_cap = 10 * scale;
  CapillaryRadii out;

  if (g.mode == DimensionMode::Axisymmetric) {
    out.rho_plus = enclosing_radius(nodes, 0.0, g.theta);
    out.rho_minus = largest_inner_radius(g, 0.0, out.rho_plus, tol, samples);
  } else {
    // Both radius profiles are concave/convex in x0 for convex bodies.
    auto outer = [&](double x0) { return enclosing_radius(nodes, x0, g.theta); };
    out.x0_plus = golden_section_min(outer, xmin, xmax, 1e-9 * scale);
    out.rho_plus = outer(out.x0_plus);
    const double wet_lo = std::min(nodes.front().x, nodes.back().x);
    const double wet_hi = std::max(nodes.front().x, nodes.back().x);
    auto inner = [&](double x0) { return -largest_inner_radius(g, x0, out.rho_plus, tol, samples); };
    out.x0_minus = golden_section_min(inner, wet_lo, wet_hi, 1e-7 * scale);
    out.rho_minus = -inner(out.x0_minus);
  }
  if (!(out.rho_plus <= r_cap) || !std::isfinite(out.rho_plus))
    throw Error(ErrorKind::SearchBracketFailure, "no enclosing cap within 10x the body diameter");
  return out;
}

CapFit fit_cap(const RadialGraph& g) {
  const auto nodes = geometry::node_positions(g);
  const double c = std::cos(g.theta);

  // Self-consistent mean distance to the ball center x0 - r cos(theta) E.
  auto radius_for = [&](double x0) {
    double r = 0.0;
    for (const auto& p : nodes) r += std::hypot(p.x - x0, p.y);
    r /= nodes.size();
    for (int it = 0; it < 200; ++it) {
      double next = 0.0;
      for (const auto& p : nodes) next += std::hypot(p.x - x0, p.y + r * c);
      next /= nodes.size();
      const bool done = std::abs(next - r) <= 1e-15 * next;
      r = next;
      if (done) break;
    }
    return r;
  };
  auto sum_sq = [&](double x0) {
    const double r = radius_for(x0);
    double s = 0.0;
    for (const auto& p : nodes) {
      const double d = std::hypot(p.x - x0, p.y + r * c) - r;
      s += d * d;
    }
    return s;
  };

  double x0 = 0.0;
  if (g.mode == DimensionMode::Planar) {
    double xmin = nodes.front().x;
    double xmax = xmin;
    for (const auto& p : nodes) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
    }
    x0 = golden_section_min(sum_sq, xmin, xmax, 1e-12 * (xmax - xmin));
  }
  CapFit fit;
  fit.cap = {x0, radius_for(x0), g.theta};
  for (const auto& p : nodes)
    fit.residual = std::max(fit.residual, std::abs(std::hypot(p.x - x0, p.y + fit.cap.r * c) - fit.cap.r));
  return fit;
}

MinkowskiSides minkowski_check(const RadialGraph& g, const NodalFields& f) {
  const int n = dimension(g.mode);
  const auto w = geometry::capillary_area(g, f).via_integrand;
  const auto c = cap_quantities(n, g.theta, 1.0).c_n_theta;
  return {geometry::weighted_mean_curvature_integral(g, f), c * std::pow(w, (n - 1.0) / n)};
}

}  // namespace caps
}  // namespace capflow
