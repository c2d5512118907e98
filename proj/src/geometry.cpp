#include "capflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "capflow/error.hpp"

namespace capflow {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NonPositiveRho: return "NonPositiveRho";
    case ErrorKind::ZeroVolume: return "ZeroVolume";
    case ErrorKind::DegenerateWeight: return "DegenerateWeight";
    case ErrorKind::NonPositiveTarget: return "NonPositiveTarget";
    case ErrorKind::SearchBracketFailure: return "SearchBracketFailure";
    case ErrorKind::InvalidInitialData: return "InvalidInitialData";
    case ErrorKind::NonPositiveH: return "NonPositiveH";
    case ErrorKind::ConvexityLost: return "ConvexityLost";
    case ErrorKind::CurvatureFloorHit: return "CurvatureFloorHit";
    case ErrorKind::ContactAngleLost: return "ContactAngleLost";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::vector<double> RadialGraph::angles() const {
  std::vector<double> out(rho.size());
  for (int i = 0; i < size(); ++i) out[i] = angle(i);
  return out;
}

double NodalFields::min_kappa() const {
  double m = *std::min_element(kappa_profile.begin(), kappa_profile.end());
  if (!kappa_azimuthal.empty())
    m = std::min(m, *std::min_element(kappa_azimuthal.begin(), kappa_azimuthal.end()));
  return m;
}

namespace geometry {

namespace {

void require_grid(const RadialGraph& g) {
  if (g.size() < 5)
    throw Error(ErrorKind::GridTooSmall, "need at least 5 nodes, got " + std::to_string(g.size()));
}

std::vector<double> weights_for(const RadialGraph& g) {
  const auto& w = grid_tables(g.mode, g.size()).weights;
  return w.empty() ? simpson_weights(g.size(), g.spacing()) : w;
}

}  // namespace

Derivatives derivatives(const RadialGraph& g, const std::optional<Ghosts>& ghosts) {
  require_grid(g);
  const int n = g.size();
  const double h = g.spacing();
  const auto& f = g.rho;
  Derivatives d{std::vector<double>(n), std::vector<double>(n)};

  // rho' uses the five-point stencil away from the ends: area-type integrals
  // then carry an O(h^4) interior error, which the isoperimetric floor check
  // needs at desk-scale grids. rho'' stays three-point.
  for (int i = 1; i + 1 < n; ++i) d.d2[i] = (f[i + 1] - 2 * f[i] + f[i - 1]) / (h * h);
  for (int i = 2; i + 2 < n; ++i) d.d1[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);

  if (ghosts) {
    d.d1[1] = (ghosts->left - 8 * f[0] + 8 * f[2] - f[3]) / (12 * h);
    d.d1[n - 2] = (f[n - 4] - 8 * f[n - 3] + 8 * f[n - 1] - ghosts->right) / (12 * h);
  } else {
    d.d1[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
    d.d1[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / (12 * h);
  }

  if (ghosts) {
    d.d1[0] = (f[1] - ghosts->left) / (2 * h);
    d.d2[0] = (f[1] - 2 * f[0] + ghosts->left) / (h * h);
    d.d1[n - 1] = (ghosts->right - f[n - 2]) / (2 * h);
    d.d2[n - 1] = (ghosts->right - 2 * f[n - 1] + f[n - 2]) / (h * h);
  } else {
    d.d1[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
    d.d2[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
    d.d1[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
    d.d2[n - 1] = (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]) / (h * h);
  }
  return d;
}

std::vector<double> nu_dot_E(const RadialGraph& g, const Derivatives& d) {
  const int n = g.size();
  const auto& tab = grid_tables(g.mode, n);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double r = g.rho[i];
    const double r1 = d.d1[i];
    const double len = std::hypot(r, r1);
    const double num = g.mode == DimensionMode::Planar ? r * tab.sin[i] - r1 * tab.cos[i]
                                                       : r * tab.cos[i] + r1 * tab.sin[i];
    out[i] = std::clamp(num / len, -1.0, 1.0);
  }
  return out;
}

CurvatureField mean_curvature(const RadialGraph& g, const Derivatives& d) {
  const int n = g.size();
  CurvatureField c;
  c.H.resize(n);
  c.kappa_profile.resize(n);
  if (g.mode == DimensionMode::Axisymmetric) c.kappa_azimuthal.resize(n);
  const auto& tab = grid_tables(g.mode, n);

  for (int i = 0; i < n; ++i) {
    const double r = g.rho[i];
    if (!(r > 0))
      throw Error(ErrorKind::NonPositiveRho, "rho[" + std::to_string(i) + "] = " + std::to_string(r));
    const double r1 = d.d1[i];
    const double r2 = d.d2[i];
    const double l2 = r * r + r1 * r1;
    const double len = std::sqrt(l2);
    const double kp = (l2 + r1 * r1 - r * r2) / (l2 * len);
    c.kappa_profile[i] = kp;
    c.H[i] = kp;
    if (g.mode == DimensionMode::Axisymmetric) {
      // The pole is an umbilic of a smooth surface of revolution.
      const double ka = i == 0 ? kp
                               : (r * tab.sin[i] - r1 * tab.cos[i]) / (len * r * tab.sin[i]);
      c.kappa_azimuthal[i] = ka;
      c.H[i] += ka;
    }
  }
#ifdef CAPFLOW_MUTATE_CURVATURE_SIGN
  for (auto& h : c.H) h = -h;
#endif
  return c;
}

std::vector<double> area_element(const RadialGraph& g, std::span<const double> rho_d1) {
  const int n = g.size();
  const auto& tab = grid_tables(g.mode, n);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double len = std::hypot(g.rho[i], rho_d1[i]);
    out[i] = g.mode == DimensionMode::Planar ? len
                                             : 2 * kPi * g.rho[i] * tab.sin[i] * len;
  }
  return out;
}

std::vector<double> simpson_weights(int n, double h) {
  if (n < 5 || n % 2 == 0)
    throw Error(ErrorKind::GridTooSmall, "Simpson quadrature needs an odd node count >= 5, got " + std::to_string(n));
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  for (auto& x : w) x *= h / 3;
  return w;
}

double integrate(std::span<const double> weights, std::span<const double> values) {
  double s = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

const GridTables& grid_tables(DimensionMode mode, int n) {
  thread_local std::map<std::pair<int, int>, GridTables> cache;
  auto [it, fresh] = cache.try_emplace({static_cast<int>(mode), n});
  if (fresh) {
    RadialGraph g{mode, kPi / 2, std::vector<double>(n, 1.0)};
    auto& t = it->second;
    t.sin.resize(n);
    t.cos.resize(n);
    for (int i = 0; i < n; ++i) {
      t.sin[i] = std::sin(g.angle(i));
      t.cos[i] = std::cos(g.angle(i));
    }
    if (n >= 5 && n % 2 == 1) t.weights = simpson_weights(n, g.spacing());
  }
  return it->second;
}

SupportFunctions support_functions(const RadialGraph& g, const NodalFields& f, double z) {
  if (g.mode == DimensionMode::Axisymmetric && z != 0.0)
    throw std::invalid_argument("axisymmetric support function is only defined about the axis foot");
  const int n = g.size();
  const double c = std::cos(g.theta);
  const auto& tab = grid_tables(g.mode, n);
  SupportFunctions s{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    const double r = g.rho[i];
    const double r1 = f.rho_d1[i];
    const double len = std::hypot(r, r1);
    double u = r * r / len;
    if (g.mode == DimensionMode::Planar) {
      const double nu_x = (r * tab.cos[i] + r1 * tab.sin[i]) / len;
      u += (g.center - z) * nu_x;
    }
    const double weight = 1.0 - c * f.nuE[i];
    if (weight <= 1e-12)
      throw Error(ErrorKind::DegenerateWeight, "1 - cos(theta) nuE <= 1e-12 at node " + std::to_string(i));
    s.u[i] = u;
    s.ubar[i] = u / weight;
  }
  return s;
}

NodalFields evaluate(const RadialGraph& g, const std::optional<Ghosts>& ghosts) {
  NodalFields f;
  auto d = derivatives(g, ghosts);
  auto curv = mean_curvature(g, d);
  f.nuE = nu_dot_E(g, d);
  f.area_elem = area_element(g, d.d1);
  f.H = std::move(curv.H);
  f.kappa_profile = std::move(curv.kappa_profile);
  f.kappa_azimuthal = std::move(curv.kappa_azimuthal);
  f.rho_d1 = std::move(d.d1);
  f.rho_d2 = std::move(d.d2);
  auto s = support_functions(g, f, g.mode == DimensionMode::Planar ? g.center : 0.0);
  f.u = std::move(s.u);
  f.ubar = std::move(s.ubar);
  return f;
}

Integrals integrals(const RadialGraph& g, const NodalFields& f) {
  const int n = g.size();
  const auto w = weights_for(g);
  Integrals out;
  out.area = integrate(w, f.area_elem);
  std::vector<double> vol(n);
  if (g.mode == DimensionMode::Planar) {
    for (int i = 0; i < n; ++i) vol[i] = 0.5 * g.rho[i] * g.rho[i];
    out.volume = integrate(w, vol);
    out.wetted = g.rho.front() + g.rho.back();
  } else {
    const auto& tab = grid_tables(g.mode, n);
    for (int i = 0; i < n; ++i) vol[i] = g.rho[i] * g.rho[i] * g.rho[i] * tab.sin[i];
    out.volume = 2 * kPi / 3 * integrate(w, vol);
    out.wetted = kPi * g.rho.back() * g.rho.back();
  }
  return out;
}

CapillaryArea capillary_area(const RadialGraph& g, const NodalFields& f) {
  const double c = std::cos(g.theta);
  const auto I = integrals(g, f);
  const int n = g.size();
  std::vector<double> integrand(n);
  for (int i = 0; i < n; ++i) integrand[i] = (1.0 - c * f.nuE[i]) * f.area_elem[i];
  return {I.area - c * I.wetted, integrate(weights_for(g), integrand)};
}

double iso_ratio(double w_theta, double volume, int n) {
  if (!(volume > 0)) throw Error(ErrorKind::ZeroVolume, "iso ratio needs positive volume");
  return std::pow(w_theta, n + 1) / std::pow(volume, n);
}

double contact_residual(const RadialGraph& g, const NodalFields& f) {
  const double c = std::cos(g.theta);
  double r = std::abs(f.nuE.back() - c);
  if (g.mode == DimensionMode::Planar) r = std::max(r, std::abs(f.nuE.front() - c));
  return r;
}

std::vector<Point2> node_positions(const RadialGraph& g) {
  std::vector<Point2> p(g.rho.size());
  for (int i = 0; i < g.size(); ++i) {
    const double phi = g.angle(i);
    if (g.mode == DimensionMode::Planar)
      p[i] = {g.center + g.rho[i] * std::cos(phi), g.rho[i] * std::sin(phi)};
    else
      p[i] = {g.rho[i] * std::sin(phi), g.rho[i] * std::cos(phi)};
  }
  return p;
}

double weighted_mean_curvature_integral(const RadialGraph& g, const NodalFields& f) {
  const int n = g.size();
  const double c = std::cos(g.theta);
  std::vector<double> integrand(n);
  for (int i = 0; i < n; ++i) integrand[i] = f.H[i] * (1.0 - c * f.nuE[i]) * f.area_elem[i];
  return integrate(weights_for(g), integrand);
}

}  // namespace geometry
}  // namespace capflow
