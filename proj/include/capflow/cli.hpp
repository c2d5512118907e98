#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "capflow/diagnostics.hpp"
#include "capflow/flow.hpp"

namespace capflow::cli {

inline constexpr std::string_view kSeriesHeader =
    "t,area,wetted,volume,W_theta,I_theta,phi,q,H_min,H_max,kappa_min,contact_residual,fit_residual,rho_minus,"
    "rho_plus";

/// key=value lines with # comments. Throws Error(ParseError) carrying the
/// line number, or Error(ValidationError) from FlowConfig::validate.
FlowConfig parse_config(std::string_view text, bool force = false);
FlowConfig load_config(const std::filesystem::path& path, bool force = false);

/// Canonical key=value form of a config; parse_config reads it back.
std::string config_echo(const FlowConfig& config);

std::string series_csv(const TimeSeries& series);

struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // NaN for empty cells

  std::vector<double> column(std::string_view name) const;
};
SeriesTable parse_series_csv(std::string_view text);

struct SnapshotFile {
  RadialGraph graph;
  double t = 0.0;
};
std::string write_snapshot(const RadialGraph& g, double t);
SnapshotFile read_snapshot(std::string_view text);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Exclusive claim on an output directory, released on destruction.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path file_;
};

std::string shape_svg(const std::vector<RadialGraph>& graphs);
std::string series_svg(const std::string& title, const std::vector<double>& t,
                       const std::vector<std::pair<std::string, std::vector<double>>>& lines);

/// 0 converged and suite passed, 2 suite failed, 3 aborted, 4 timed out.
int exit_code(Verdict verdict, bool suite_passed);

struct RunOutcome {
  RunResult result;
  SuiteReport suite;
  int exit_code = 0;
  std::filesystem::path dir;
};

/// Runs the flow and writes series.csv, snapshots/, report.txt, config.echo
/// and plots/ under the config's out_dir (CAPFLOW_OUT overrides it).
RunOutcome run_to_directory(const FlowConfig& config);

/// SVG files for a .snap file, a series.csv or a run directory. Returns the
/// written paths; throws Error(Io) when there is nothing to plot.
std::vector<std::filesystem::path> plot(const std::filesystem::path& path);

struct VerifyLine {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};
std::vector<VerifyLine> verify(bool quick);

}  // namespace capflow::cli
