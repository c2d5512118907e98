#include <doctest.h>

#include <cmath>
#include <vector>

#include "capflow/caps.hpp"
#include "capflow/error.hpp"
#include "capflow/flow.hpp"

using namespace capflow;

namespace {

// Cap volume by brute-force slicing of the ball above the floor.
double sliced_volume(int n, double theta, double r) {
  const double zc = -r * std::cos(theta);
  const int slices = 200000;
  const double top = zc + r;
  const double dz = top / slices;
  double v = 0.0;
  for (int k = 0; k < slices; ++k) {
    const double z = (k + 0.5) * dz;
    const double half = std::sqrt(std::max(0.0, r * r - (z - zc) * (z - zc)));
    v += (n == 1 ? 2 * half : kPi * half * half) * dz;
  }
  return v;
}

RadialGraph stretched_half_disk(double stretch, int nodes) {
  RadialGraph g;
  g.mode = DimensionMode::Planar;
  g.theta = kPi / 2;
  g.rho.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double p = g.angle(i);
    g.rho[i] = stretch / std::hypot(std::cos(p), stretch * std::sin(p));
  }
  return g;
}

}  // namespace

TEST_CASE("cap quantities against slicing and frozen values") {
  for (int n : {1, 2})
    for (double theta : {kPi / 6, kPi / 3, kPi / 2})
      for (double r : {0.5, 2.0}) {
        const auto q = caps::cap_quantities(n, theta, r);
        CHECK(q.volume == doctest::Approx(sliced_volume(n, theta, r)).epsilon(1e-8));
        CHECK(q.H == doctest::Approx(n / r));
      }
  const auto q1 = caps::cap_quantities(1, kPi / 3, 1.0);
  CHECK(q1.volume == doctest::Approx(0.61418484930).epsilon(1e-10));
  CHECK(q1.I_theta == doctest::Approx(2.45673939721).epsilon(1e-10));
  const auto q2 = caps::cap_quantities(2, kPi / 2, 1.0);
  CHECK(q2.I_theta == doctest::Approx(18 * kPi).epsilon(1e-13));
  CHECK(q2.I_theta == doctest::Approx(56.5486678).epsilon(1e-8));
  CHECK_THROWS_AS(caps::cap_quantities(1, kPi / 3, 0.0), Error);
}

TEST_CASE("radius from constraint inverts the closed forms") {
  for (int n : {1, 2}) {
    const auto q = caps::cap_quantities(n, kPi / 3, 1.7);
    CHECK(caps::radius_from_constraint(n, kPi / 3, q.volume, ConstraintKind::Volume) == doctest::Approx(1.7));
    CHECK(caps::radius_from_constraint(n, kPi / 3, q.W_theta, ConstraintKind::CapillaryArea) ==
          doctest::Approx(1.7));
  }
  try {
    caps::radius_from_constraint(1, kPi / 3, 0.0, ConstraintKind::Volume);
    FAIL("expected NonPositiveTarget");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveTarget);
  }
}

TEST_CASE("contains_point") {
  const auto g = caps::cap_profile({0.0, 1.0, kPi / 3}, DimensionMode::Planar, 201);
  CHECK(caps::contains_point(g, {0.0, 0.4}));
  CHECK_FALSE(caps::contains_point(g, {0.0, 0.6}));
  CHECK_FALSE(caps::contains_point(g, {0.0, -0.01}));
  CHECK(caps::contains_point(g, {0.0, 0.0}));
  const auto axi = caps::cap_profile({0.0, 1.0, kPi / 2}, DimensionMode::Axisymmetric, 201);
  CHECK(caps::contains_point(axi, {-0.7, 0.7}));
  CHECK_FALSE(caps::contains_point(axi, {0.72, 0.72}));
}

TEST_CASE("capillary radii of exact caps") {
  for (auto mode : {DimensionMode::Planar, DimensionMode::Axisymmetric}) {
    const auto g = caps::cap_profile({0.0, 1.3, kPi / 3}, mode, 201);
    const auto r = caps::capillary_radii(g);
    CHECK(r.rho_minus == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(r.rho_plus == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(r.rho_minus <= r.rho_plus);
  }
}

TEST_CASE("capillary radii of a stretched half disk against brute force") {
  const double stretch = 1.5;
  const auto g = stretched_half_disk(stretch, 401);

  // Brute force over floor centers on a dense outline.
  std::vector<std::pair<double, double>> outline;
  for (int k = 0; k <= 20000; ++k) {
    const double t = kPi * k / 20000;
    outline.push_back({stretch * std::cos(t), std::sin(t)});
  }
  double best_outer = 1e300;
  double best_inner = 0.0;
  for (int j = -150; j <= 150; ++j) {
    const double x0 = j * 0.01;
    double far = 0.0, near = 1e300;
    for (const auto& [x, y] : outline) {
      const double d = std::hypot(x - x0, y);
      far = std::max(far, d);
      near = std::min(near, d);
    }
    best_outer = std::min(best_outer, far);
    best_inner = std::max(best_inner, near);
  }
  CHECK(best_inner == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(best_outer == doctest::Approx(1.5).epsilon(1e-6));

  const auto r = caps::capillary_radii(g);
  CHECK(std::abs(r.rho_minus - best_inner) < 2e-3);
  CHECK(std::abs(r.rho_plus - best_outer) < 2e-3);
}

TEST_CASE("fit_cap") {
  const auto exact = caps::cap_profile({0.0, 0.8, kPi / 3}, DimensionMode::Planar, 201);
  const auto fit = caps::fit_cap(exact);
  CHECK(fit.cap.r == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(std::abs(fit.cap.x0) < 1e-8);
  CHECK(fit.residual < 1e-9);

  auto bumped = exact;
  for (int i = 0; i < bumped.size(); ++i) bumped.rho[i] *= 1 + 0.01 * flow::perturbation_shape(3, bumped.angle(i), bumped.mode);
  CHECK(caps::fit_cap(bumped).residual > 1e-3);

  const auto ellipse = stretched_half_disk(1.5, 201);
  const auto efit = caps::fit_cap(ellipse);
  CHECK(efit.residual > 0.05);
  CHECK(std::abs(efit.cap.x0) < 1e-6);

  const auto axi = caps::cap_profile({0.0, 1.2, kPi / 4}, DimensionMode::Axisymmetric, 201);
  CHECK(caps::fit_cap(axi).cap.r == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("Minkowski sides agree on caps") {
  for (auto mode : {DimensionMode::Planar, DimensionMode::Axisymmetric}) {
    const auto g = caps::cap_profile({0.0, 1.0, kPi / 3}, mode, 2001);
    const auto m = caps::minkowski_check(g, flow::evaluate_fields(g));
    CHECK(m.lhs == doctest::Approx(m.rhs).epsilon(1e-6));
  }
  // For curves both sides equal 2(theta - sin cos) whatever the shape; for
  // surfaces a bumped cap is strictly on the correct side.
  auto curve = caps::cap_profile({0.0, 1.0, kPi / 3}, DimensionMode::Planar, 401);
  for (int i = 0; i < curve.size(); ++i) curve.rho[i] *= 1 + 0.05 * flow::perturbation_shape(2, curve.angle(i), curve.mode);
  const auto mc = caps::minkowski_check(curve, flow::evaluate_fields(curve));
  CHECK(mc.lhs == doctest::Approx(mc.rhs).epsilon(1e-5));
  auto surf = caps::cap_profile({0.0, 1.0, kPi / 3}, DimensionMode::Axisymmetric, 401);
  for (int i = 0; i < surf.size(); ++i) surf.rho[i] *= 1 + 0.05 * flow::perturbation_shape(1, surf.angle(i), surf.mode);
  const auto ms = caps::minkowski_check(surf, flow::evaluate_fields(surf));
  CHECK(ms.lhs > ms.rhs * (1 + 1e-4));
}
