#include <doctest.h>

#include <cmath>
#include <vector>

#include "capflow/caps.hpp"
#include "capflow/error.hpp"
#include "capflow/flow.hpp"
#include "capflow/geometry.hpp"

using namespace capflow;

namespace {

// Circle through three points; returns 1/R.
double circumcurvature(double ax, double ay, double bx, double by, double cx, double cy) {
  const double a = std::hypot(bx - cx, by - cy);
  const double b = std::hypot(ax - cx, ay - cy);
  const double c = std::hypot(ax - bx, ay - by);
  const double cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return 2 * std::abs(cross) / (a * b * c);
}

// Planar cap of radius r about the origin written out by hand:
// rho^2 + 2 rho r c sin(phi) - r^2 s^2 = 0.
struct CapOracle {
  double r, c, s;
  double A(double p) const { return r * r * (c * c * std::sin(p) * std::sin(p) + s * s); }
  double rho(double p) const { return -r * c * std::sin(p) + std::sqrt(A(p)); }
  double d1(double p) const {
    return -r * c * std::cos(p) + r * r * c * c * std::sin(p) * std::cos(p) / std::sqrt(A(p));
  }
  double d2(double p) const {
    const double k = r * r * c * c;
    const double sc = std::sin(p) * std::cos(p);
    return r * c * std::sin(p) + k * std::cos(2 * p) / std::sqrt(A(p)) - k * sc * (2 * k * sc) / (2 * std::pow(A(p), 1.5));
  }
};

struct DerivErrors {
  double d1, d2;
};

DerivErrors cap_derivative_errors(int nodes) {
  const double theta = kPi / 3;
  const CapOracle o{1.0, std::cos(theta), std::sin(theta)};
  const auto g = caps::cap_profile({0.0, 1.0, theta}, DimensionMode::Planar, nodes);
  const auto d = geometry::derivatives(g, std::nullopt);
  DerivErrors e{0, 0};
  for (int i = 0; i < nodes; ++i) {
    e.d1 = std::max(e.d1, std::abs(d.d1[i] - o.d1(g.angle(i))));
    e.d2 = std::max(e.d2, std::abs(d.d2[i] - o.d2(g.angle(i))));
  }
  return e;
}

}  // namespace

TEST_CASE("hand-written cap oracle is self-consistent") {
  const CapOracle o{1.0, 0.5, std::sqrt(3.0) / 2};
  for (double p : {0.0, 0.3, 1.2, 2.5}) {
    const double h = 1e-5;
    CHECK(o.d1(p) == doctest::Approx((o.rho(p + h) - o.rho(p - h)) / (2 * h)).epsilon(1e-8));
    CHECK(o.d2(p) == doctest::Approx((o.d1(p + h) - o.d1(p - h)) / (2 * h)).epsilon(1e-7));
    CHECK(o.rho(p) == doctest::Approx(caps::profile_radius(1.0, kPi / 3, std::sin(p))).epsilon(1e-14));
  }
}

TEST_CASE("derivative stencils converge at second order on a cap") {
  const auto coarse = cap_derivative_errors(201);
  const auto fine = cap_derivative_errors(401);
  CHECK(coarse.d1 < 1e-3);
  CHECK(coarse.d2 < 1e-3);
  CHECK(coarse.d1 / fine.d1 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(coarse.d2 / fine.d2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("curvature of an ellipse matches a dense-polyline circumcircle") {
  // Half ellipse x^2/4 + y^2 = 1 as a radial graph about its center.
  const double a = 2.0, b = 1.0;
  RadialGraph g;
  g.mode = DimensionMode::Planar;
  g.rho.resize(801);
  for (int i = 0; i < g.size(); ++i) {
    const double p = g.angle(i);
    g.rho[i] = a * b / std::hypot(b * std::cos(p), a * std::sin(p));
  }
  // The ellipse is symmetric about the floor, so even ghosts are exact.
  const Ghosts ghosts{g.rho[1], g.rho[g.size() - 2]};
  const auto d = geometry::derivatives(g, ghosts);
  const auto c = geometry::mean_curvature(g, d);

  auto polyline_kappa = [&](double t) {
    const double dt = 1e-4;
    return circumcurvature(a * std::cos(t - dt), b * std::sin(t - dt), a * std::cos(t), b * std::sin(t),
                           a * std::cos(t + dt), b * std::sin(t + dt));
  };
  const double k_end = polyline_kappa(0.0);
  const double k_top = polyline_kappa(kPi / 2);
  CHECK(k_end == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(k_top == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(c.kappa_profile.front() == doctest::Approx(k_end).epsilon(1e-4));
  CHECK(c.kappa_profile[400] == doctest::Approx(k_top).epsilon(1e-4));
  CHECK(c.kappa_profile.back() == doctest::Approx(k_end).epsilon(1e-4));
}

TEST_CASE("Simpson weights") {
  const int n = 201;
  const double h = kPi / (n - 1);
  const auto w = geometry::simpson_weights(n, h);
  std::vector<double> s(n), cubic(n);
  for (int i = 0; i < n; ++i) {
    s[i] = std::sin(i * h);
    const double x = i * h;
    cubic[i] = x * x * x - 2 * x;
  }
  CHECK(geometry::integrate(w, s) == doctest::Approx(2.0).epsilon(1e-9));
  const double P = kPi;
  CHECK(geometry::integrate(w, cubic) == doctest::Approx(P * P * P * P / 4 - P * P).epsilon(1e-13));
  CHECK_THROWS_AS(geometry::simpson_weights(4, 0.1), Error);
  CHECK_THROWS_AS(geometry::simpson_weights(8, 0.1), Error);
}

TEST_CASE("grid tables agree with direct evaluation") {
  const auto& t = geometry::grid_tables(DimensionMode::Axisymmetric, 41);
  RadialGraph g{DimensionMode::Axisymmetric, kPi / 2, std::vector<double>(41, 1.0)};
  for (int i = 0; i < 41; ++i) {
    CHECK(t.sin[i] == std::sin(g.angle(i)));
    CHECK(t.cos[i] == std::cos(g.angle(i)));
  }
  CHECK(t.weights == geometry::simpson_weights(41, g.spacing()));
  CHECK(geometry::grid_tables(DimensionMode::Planar, 40).weights.empty());
}

TEST_CASE("exact cap snapshot quantities, n=1 theta=pi/3 r=1") {
  const auto g = caps::cap_profile({0.0, 1.0, kPi / 3}, DimensionMode::Planar, 2001);
  const auto f = flow::evaluate_fields(g);
  const auto I = geometry::integrals(g, f);
  const auto W = geometry::capillary_area(g, f);
  CHECK(I.volume == doctest::Approx(0.6141849).epsilon(1e-7));
  CHECK(geometry::iso_ratio(W.via_boundary, I.volume, 1) == doctest::Approx(2.4567395).epsilon(1e-7));
  // The Robin ghost carries an O(h^3) error, so curvature at the contact
  // nodes is only first order; the interior is second order.
  for (int i = 2; i + 2 < g.size(); ++i) CHECK(f.H[i] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f.H.front() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(f.H.back() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(geometry::contact_residual(g, f) < 1e-10);
}

TEST_CASE("hemisphere: both capillary areas equal pi") {
  const auto g = caps::cap_profile({0.0, 1.0, kPi / 2}, DimensionMode::Planar, 201);
  const auto W = geometry::capillary_area(g, flow::evaluate_fields(g));
  CHECK(W.via_boundary == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(W.via_integrand == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("axisymmetric cap: pole curvature and surface area") {
  const double theta = kPi / 3;
  const auto g = caps::cap_profile({0.0, 1.0, theta}, DimensionMode::Axisymmetric, 401);
  const auto f = flow::evaluate_fields(g);
  for (int i = 0; i + 2 < g.size(); ++i) CHECK(f.H[i] == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(f.H.back() == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(f.kappa_azimuthal.front() == f.kappa_profile.front());
  // Zone of a unit sphere of height 1 - cos(theta).
  CHECK(geometry::integrals(g, f).area == doctest::Approx(2 * kPi * (1 - std::cos(theta))).epsilon(1e-8));
}

TEST_CASE("geometry errors") {
  RadialGraph g{DimensionMode::Planar, kPi / 2, {1, 1, 1, 1}};
  CHECK_THROWS_AS(geometry::derivatives(g, std::nullopt), Error);

  g.rho = std::vector<double>(11, 1.0);
  g.rho[5] = 0.0;
  try {
    geometry::evaluate(g, std::nullopt);
    FAIL("expected NonPositiveRho");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveRho);
  }

  CHECK_THROWS_AS(geometry::iso_ratio(1.0, 0.0, 1), Error);

  // theta = 0 makes the weight 1 - nuE vanish at the top of a circle.
  RadialGraph circle{DimensionMode::Planar, 0.0, std::vector<double>(21, 1.0)};
  try {
    geometry::evaluate(circle, Ghosts{1.0, 1.0});
    FAIL("expected DegenerateWeight");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateWeight);
  }

  RadialGraph axi = caps::cap_profile({0.0, 1.0, kPi / 3}, DimensionMode::Axisymmetric, 41);
  const auto f = flow::evaluate_fields(axi);
  CHECK_THROWS_AS(geometry::support_functions(axi, f, 0.5), std::invalid_argument);
}

TEST_CASE("support function of a centered circle is its radius") {
  RadialGraph g{DimensionMode::Planar, kPi / 2, std::vector<double>(41, 2.0)};
  const auto f = geometry::evaluate(g, Ghosts{2.0, 2.0});
  for (int i = 0; i < g.size(); ++i) {
    CHECK(f.u[i] == doctest::Approx(2.0));
    CHECK(f.ubar[i] == doctest::Approx(2.0));
  }
}
