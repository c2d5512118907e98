#include <doctest.h>

#include <cmath>

#include "capflow/diagnostics.hpp"
#include "capflow/error.hpp"

using namespace capflow;

namespace {

FlowConfig short_config() {
  FlowConfig cfg;
  cfg.N = 81;
  cfg.perturbations = {{2, 0.05}};
  cfg.t_max = 0.05;
  cfg.snapshot_stride = 50;
  cfg.radii_stride = 2;
  return cfg;
}

}  // namespace

TEST_CASE("snapshot of a perturbed cap") {
  FlowConfig cfg;
  cfg.perturbations = {{2, 0.05}};
  const auto s = flow::initial_data(cfg);
  const auto snap = diagnostics::snapshot(s, cfg, true);
  CHECK(snap.kappa_min > 0);
  CHECK(snap.rho_minus < 1.0);
  CHECK(snap.rho_plus > 1.0);
  CHECK(snap.I_theta == doctest::Approx(snap.W_theta * snap.W_theta / snap.volume).epsilon(1e-15));
  CHECK(std::abs(snap.W_theta - snap.W_theta_integrand) < 1e-5 * snap.W_theta);
  CHECK(snap.ubar_min > 0);

  const auto bare = diagnostics::snapshot(s, cfg, false);
  CHECK_FALSE(bare.has_radii());
}

TEST_CASE("run records an increasing series and a timed-out verdict") {
  const auto cfg = short_config();
  const auto r = diagnostics::run(cfg);
  CHECK(r.verdict == Verdict::TimedOut);
  REQUIRE(r.series.snapshots.size() >= 2);
  for (size_t k = 1; k < r.series.snapshots.size(); ++k)
    CHECK(r.series.snapshots[k].t > r.series.snapshots[k - 1].t);
  CHECK(r.series.snapshots.front().has_radii());
  CHECK(r.series.snapshots.back().has_radii());
  CHECK_THROWS_AS(diagnostics::convergence_report(r.final_state, r.series, cfg), Error);

  const auto report = diagnostics::assert_suite(r.series, cfg);
  CHECK_FALSE(report.passed());
  REQUIRE(report.find("run_converged") != nullptr);
  CHECK_FALSE(report.find("run_converged")->passed);
  CHECK(report.find("run_converged")->first_violation_t.has_value());
  CHECK(report.find("conservation")->passed);
  CHECK(report.find("convexity")->passed);
  CHECK(report.find("contact_angle")->passed);
  CHECK(report.find("iso_limit") == nullptr);
}

TEST_CASE("assert_suite is a pure function of the series") {
  const auto cfg = short_config();
  const auto r = diagnostics::run(cfg);
  const auto a = diagnostics::assert_suite(r.series, cfg).serialize();
  const auto b = diagnostics::assert_suite(r.series, cfg).serialize();
  CHECK(a == b);
  CHECK(a.rfind("suite=capflow-assert-suite v1\n", 0) == 0);
}

TEST_CASE("exact cap run passes every check") {
  FlowConfig cfg;
  const auto r = diagnostics::run(cfg);
  CHECK(r.verdict == Verdict::Converged);
  CHECK(r.series.snapshots.size() == 2);
  const auto report = diagnostics::assert_suite(r.series, cfg);
  CHECK(report.passed());
  const auto conv = diagnostics::convergence_report(r.final_state, r.series, cfg);
  // The run starts from the discrete equilibrium, which sits O(h^2) off the
  // closed-form sphere.
  CHECK(conv.radius_error < 1e-6);
  CHECK(conv.serialize().rfind("# ", 0) == 0);
}

TEST_CASE("empty series fails the suite") {
  TimeSeries empty;
  const auto report = diagnostics::assert_suite(empty, FlowConfig{});
  CHECK_FALSE(report.passed());
}

TEST_CASE("enclosure radius") {
  CHECK(diagnostics::enclosure_radius(kPi / 2, 1.0) == doctest::Approx(3.0));
  CHECK(diagnostics::enclosure_radius(kPi / 3, 2.0) == doctest::Approx(2.0 * (1 + 2 * std::sqrt(3.0))));
}
