#include <CLI11.hpp>

#include <iostream>

#include "capflow/caps.hpp"
#include "capflow/cli.hpp"
#include "capflow/error.hpp"
#include "capflow/format.hpp"

using namespace capflow;

namespace {

int cmd_run(const std::string& path, bool force, bool project) {
  auto config = cli::load_config(path, force);
  config.project_constraint = project;
  const auto out = cli::run_to_directory(config);
  std::cout << "verdict=" << to_string(out.result.verdict) << "\n";
  if (!out.result.series.abort_reason.empty()) std::cout << "abort_reason=" << out.result.series.abort_reason << "\n";
  std::cout << "steps=" << out.result.series.steps << "\n";
  std::cout << "t=" << format_double(out.result.final_state.t) << "\n";
  std::cout << "suite=" << (out.suite.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : out.suite.checks)
    if (!c.passed) std::cout << "failed." << c.name << " margin=" << format_double(c.margin) << "\n";
  std::cout << "out_dir=" << out.dir.string() << "\n";
  return out.exit_code;
}

int cmd_cap_info(int n, double theta, double r) {
  if (n != 1 && n != 2) throw Error(ErrorKind::ValidationError, "n must be 1 or 2");
  if (!(theta > 0 && theta < kPi)) throw Error(ErrorKind::ValidationError, "theta in (0, pi) required");
  const auto q = caps::cap_quantities(n, theta, r);
  std::cout << "n=" << n << "\ntheta=" << format_double(theta) << "\nr=" << format_double(r) << "\n";
  std::cout << "area=" << format_double(q.area) << "\n";
  std::cout << "wetted=" << format_double(q.wetted) << "\n";
  std::cout << "volume=" << format_double(q.volume) << "\n";
  std::cout << "W_theta=" << format_double(q.W_theta) << "\n";
  std::cout << "I_theta=" << format_double(q.I_theta) << "\n";
  std::cout << "H=" << format_double(q.H) << "\n";
  std::cout << "c_n_theta=" << format_double(q.c_n_theta) << "\n";
  return 0;
}

int cmd_radii(const std::string& path) {
  const auto snap = cli::read_snapshot(cli::read_file(path));
  const auto r = caps::capillary_radii(snap.graph);
  std::cout << "t=" << format_double(snap.t) << "\n";
  std::cout << "rho_minus=" << format_double(r.rho_minus) << "\n";
  std::cout << "x0_minus=" << format_double(r.x0_minus) << "\n";
  std::cout << "rho_plus=" << format_double(r.rho_plus) << "\n";
  std::cout << "x0_plus=" << format_double(r.x0_plus) << "\n";
  std::cout << "ratio=" << format_double(r.rho_plus / r.rho_minus) << "\n";
  return 0;
}

int cmd_verify(bool quick) {
  bool all = true;
  for (const auto& line : cli::verify(quick)) {
    all = all && line.passed;
    std::cout << (line.passed ? "PASS " : "FAIL ") << line.name << " margin=" << format_double(line.margin);
    if (!line.detail.empty()) std::cout << " (" << line.detail << ")";
    std::cout << std::endl;
  }
  std::cout << "verify=" << (all ? "PASS" : "FAIL") << "\n";
  return all ? 0 : 1;
}

int cmd_plot(const std::string& path) {
  for (const auto& p : cli::plot(path)) std::cout << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capflow: capillary power mean curvature flow of radial graphs"};
  app.require_subcommand(1);

  std::string config_path;
  bool force = false;
  bool project = false;
  auto* run = app.add_subcommand("run", "integrate a configuration and write run artifacts");
  run->add_option("config", config_path, "key=value configuration file")->required();
  run->add_flag("--force", force, "accept theta outside (0, pi/2]");
  run->add_flag("--project", project, "hold the conserved quantity fixed by a normal offset after each step");

  int n = 1;
  double theta = 0.0;
  double r = 0.0;
  auto* info = app.add_subcommand("cap-info", "closed-form quantities of a spherical cap");
  info->add_option("--n", n, "dimension (1 planar, 2 axisymmetric)")->required();
  info->add_option("--theta", theta, "contact angle")->required();
  info->add_option("--r", r, "sphere radius")->required();

  std::string snap_path;
  auto* radii = app.add_subcommand("radii", "inner and outer capillary radii of a snapshot");
  radii->add_option("snapshot", snap_path, "snapshot file")->required();

  bool quick = false;
  auto* verify = app.add_subcommand("verify", "run the built-in acceptance configurations");
  verify->add_flag("--quick", quick, "small subset");

  std::string plot_path;
  auto* plot = app.add_subcommand("plot", "SVG plots of a snapshot, a series.csv or a run directory");
  plot->add_option("path", plot_path, "input path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, force, project);
    if (*info) return cmd_cap_info(n, theta, r);
    if (*radii) return cmd_radii(snap_path);
    if (*verify) return cmd_verify(quick);
    if (*plot) return cmd_plot(plot_path);
  } catch (const std::exception& e) {
    std::cerr << "capflow: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
