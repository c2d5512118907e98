#include "capflow/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "capflow/error.hpp"
#include "capflow/format.hpp"

namespace capflow::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return v;
}

std::string_view mode_name(DimensionMode m) { return m == DimensionMode::Planar ? "planar" : "axisymmetric"; }

DimensionMode parse_mode(std::string_view v) {
  if (v == "planar") return DimensionMode::Planar;
  if (v == "axisymmetric" || v == "axi") return DimensionMode::Axisymmetric;
  throw std::invalid_argument("mode must be planar or axisymmetric, got '" + std::string(v) + "'");
}

Variant parse_variant(std::string_view v) {
  if (v == "volume") return Variant::VolumePreserving;
  if (v == "area") return Variant::AreaPreserving;
  throw std::invalid_argument("variant must be volume or area, got '" + std::string(v) + "'");
}

std::vector<PerturbationMode> parse_modes(std::string_view v) {
  std::vector<PerturbationMode> out;
  if (trim(v).empty()) return out;
  for (auto item : split(v, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw std::invalid_argument("perturbation must be k:eps, got '" + std::string(item) + "'");
    out.push_back({parse_int(parts[0]), parse_double(parts[1])});
  }
  return out;
}

std::string snapshot_name(size_t index) {
  std::ostringstream os;
  os << std::setw(6) << std::setfill('0') << index << ".snap";
  return os.str();
}

}  // namespace

FlowConfig parse_config(std::string_view text, bool force) {
  FlowConfig cfg;
  cfg.allow_unsupported_theta = force;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, where() + "expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (auto it = seen.find(key); it != seen.end())
      throw Error(ErrorKind::ParseError, where() + "duplicate key '" + key + "' (first on line " +
                                             std::to_string(it->second) + ")");
    seen.emplace(key, line_no);
    try {
      if (key == "mode") cfg.mode = parse_mode(value);
      else if (key == "alpha") cfg.alpha = parse_double(value);
      else if (key == "theta") cfg.theta = parse_double(value);
      else if (key == "variant") cfg.variant = parse_variant(value);
      else if (key == "N") cfg.N = parse_int(value);
      else if (key == "cfl_safety") cfg.cfl_safety = parse_double(value);
      else if (key == "t_max") cfg.t_max = parse_double(value);
      else if (key == "conv_tol") cfg.conv_tol = parse_double(value);
      else if (key == "snapshot_stride") cfg.snapshot_stride = parse_int(value);
      else if (key == "H_floor") cfg.H_floor = parse_double(value);
      else if (key == "perturb_modes") cfg.perturbations = parse_modes(value);
      else if (key == "radii_stride") cfg.radii_stride = parse_int(value);
      else if (key == "out_dir") cfg.out_dir = std::string(value);
      else throw Error(ErrorKind::ParseError, where() + "unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorKind::ParseError, where() + key + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

FlowConfig load_config(const fs::path& path, bool force) { return parse_config(read_file(path), force); }

std::string config_echo(const FlowConfig& c) {
  std::ostringstream os;
  os << "mode=" << mode_name(c.mode) << "\n";
  os << "alpha=" << format_double(c.alpha) << "\n";
  os << "theta=" << format_double(c.theta) << "\n";
  os << "variant=" << to_string(c.variant) << "\n";
  os << "N=" << c.N << "\n";
  os << "cfl_safety=" << format_double(c.cfl_safety) << "\n";
  os << "t_max=" << format_double(c.t_max) << "\n";
  os << "conv_tol=" << format_double(c.conv_tol) << "\n";
  os << "snapshot_stride=" << c.snapshot_stride << "\n";
  os << "H_floor=" << format_double(c.H_floor) << "\n";
  os << "perturb_modes=";
  for (size_t i = 0; i < c.perturbations.size(); ++i)
    os << (i ? ";" : "") << c.perturbations[i].k << ":" << format_double(c.perturbations[i].amplitude);
  os << "\n";
  os << "radii_stride=" << c.radii_stride << "\n";
  os << "out_dir=" << c.out_dir << "\n";
  return os.str();
}

std::string series_csv(const TimeSeries& series) {
  std::string out(kSeriesHeader);
  out += "\n";
  auto cell = [&](double v, bool last = false) {
    if (!std::isnan(v)) out += format_double(v);
    out += last ? "\n" : ",";
  };
  for (const auto& s : series.snapshots) {
    for (double v : {s.t, s.area, s.wetted, s.volume, s.W_theta, s.I_theta, s.phi, s.q, s.H_min, s.H_max,
                     s.kappa_min, s.contact_residual, s.fit_residual, s.rho_minus})
      cell(v);
    cell(s.rho_plus, true);
  }
  return out;
}

std::vector<double> SeriesTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::ParseError, "series has no column '" + std::string(name) + "'");
  const auto k = static_cast<size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

SeriesTable parse_series_csv(std::string_view text) {
  SeriesTable table;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (table.columns.empty()) {
      for (auto c : cells) table.columns.emplace_back(trim(c));
      continue;
    }
    if (cells.size() != table.columns.size())
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.columns.size()) + " cells");
    std::vector<double> row;
    for (auto c : cells) {
      c = trim(c);
      try {
        row.push_back(c.empty() ? kNaN : parse_double(c));
      } catch (const std::invalid_argument& e) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw Error(ErrorKind::ParseError, "series has no header");
  return table;
}

std::string write_snapshot(const RadialGraph& g, double t) {
  std::string out = "CAPFLOW-SNAP v1\n";
  out += "mode=" + std::string(mode_name(g.mode)) + " theta=" + format_double(g.theta) +
         " N=" + std::to_string(g.size()) + " t=" + format_double(t) + " center=" + format_double(g.center) + "\n";
  for (int i = 0; i < g.size(); ++i) out += format_double(g.angle(i)) + " " + format_double(g.rho[i]) + "\n";
  return out;
}

SnapshotFile read_snapshot(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty() || trim(lines[0]) != "CAPFLOW-SNAP v1")
    throw Error(ErrorKind::ParseError, "line 1: expected 'CAPFLOW-SNAP v1'");
  if (lines.size() < 2) throw Error(ErrorKind::ParseError, "line 2: missing metadata");

  SnapshotFile snap;
  int n = -1;
  try {
    for (auto tok : split(trim(lines[1]), ' ')) {
      if (tok.empty()) continue;
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("bad token '" + std::string(tok) + "'");
      const auto key = tok.substr(0, eq);
      const auto value = tok.substr(eq + 1);
      if (key == "mode") snap.graph.mode = parse_mode(value);
      else if (key == "theta") snap.graph.theta = parse_double(value);
      else if (key == "N") n = parse_int(value);
      else if (key == "t") snap.t = parse_double(value);
      else if (key == "center") snap.graph.center = parse_double(value);
      else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::ParseError, std::string("line 2: ") + e.what());
  }
  if (n < 5) throw Error(ErrorKind::ParseError, "line 2: N missing or below 5");
  if (lines.size() != static_cast<size_t>(n) + 2)
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(n) + " node lines, found " +
                                           std::to_string(lines.size() - 2));
  snap.graph.rho.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto line_no = std::to_string(i + 3);
    const auto parts = split(trim(lines[i + 2]), ' ');
    if (parts.size() != 2) throw Error(ErrorKind::ParseError, "line " + line_no + ": expected 'phi rho'");
    try {
      const double phi = parse_double(parts[0]);
      snap.graph.rho[i] = parse_double(parts[1]);
      if (std::abs(phi - snap.graph.angle(i)) > 1e-12)
        throw std::invalid_argument("angle does not match the uniform grid");
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorKind::ParseError, "line " + line_no + ": " + e.what());
    }
  }
  return snap;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto " + path.string());
  }
}

DirectoryLock::DirectoryLock(const fs::path& dir) : file_(dir / ".capflow.lock") {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  const int fd = ::open(file_.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
  if (fd < 0)
    throw Error(ErrorKind::Io, dir.string() + " is in use by another run (remove " + file_.string() +
                                   " if that run is gone)");
  const auto pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(file_, ec);
}

int exit_code(Verdict verdict, bool suite_passed) {
  if (verdict == Verdict::Aborted) return 3;
  if (verdict == Verdict::TimedOut) return 4;
  return suite_passed ? 0 : 2;
}

namespace {

std::vector<fs::path> write_plots(const fs::path& dir, const SeriesTable& table,
                                  const std::vector<RadialGraph>& shapes) {
  if (table.rows.empty()) throw Error(ErrorKind::Io, "series is empty, nothing to plot");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string());
  std::vector<fs::path> written;
  auto put = [&](const std::string& name, const std::string& svg) {
    write_atomic(dir / name, svg);
    written.push_back(dir / name);
  };
  const auto t = table.column("t");
  put("I_theta.svg", series_svg("I_theta", t, {{"I_theta", table.column("I_theta")}}));
  put("volume.svg", series_svg("volume", t, {{"volume", table.column("volume")}}));
  put("W_theta.svg", series_svg("W_theta", t, {{"W_theta", table.column("W_theta")}}));
  put("H_extrema.svg",
      series_svg("H extrema", t, {{"H_max", table.column("H_max")}, {"H_min", table.column("H_min")}}));
  if (!shapes.empty()) put("shape.svg", shape_svg(shapes));
  return written;
}

}  // namespace

RunOutcome run_to_directory(const FlowConfig& config) {
  RunOutcome out;
  const char* env = std::getenv("CAPFLOW_OUT");
  out.dir = env && *env ? fs::path(env) : fs::path(config.out_dir);
  DirectoryLock lock(out.dir);

  out.result = diagnostics::run(config);
  const auto& series = out.result.series;
  out.suite = diagnostics::assert_suite(series, config);
  out.exit_code = exit_code(out.result.verdict, out.suite.passed());

  const fs::path snap_dir = out.dir / "snapshots";
  std::error_code ec;
  fs::create_directories(snap_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + snap_dir.string());
  for (const auto& entry : fs::directory_iterator(snap_dir))
    if (entry.path().extension() == ".snap") fs::remove(entry.path(), ec);
  for (size_t k = 0; k < series.snapshots.size(); ++k)
    write_atomic(snap_dir / snapshot_name(k), write_snapshot(series.snapshots[k].graph, series.snapshots[k].t));

  const auto csv = series_csv(series);
  write_atomic(out.dir / "series.csv", csv);
  write_atomic(out.dir / "config.echo", config_echo(config));

  std::string report = "verdict=" + std::string(to_string(out.result.verdict)) + "\n";
  if (!series.abort_reason.empty()) report += "abort_reason=" + series.abort_reason + "\n";
  report += "steps=" + std::to_string(series.steps) + "\n";
  report += "snapshots=" + std::to_string(series.snapshots.size()) + "\n";
  report += "exit_code=" + std::to_string(out.exit_code) + "\n";
  report += out.suite.serialize();
  if (out.result.verdict == Verdict::Converged)
    report += diagnostics::convergence_report(out.result.final_state, series, config).serialize();
  else
    report += "# no convergence report: run did not converge\n";
  write_atomic(out.dir / "report.txt", report);

  write_plots(out.dir / "plots", parse_series_csv(csv), {series.snapshots.front().graph, series.snapshots.back().graph});
  return out;
}

std::vector<fs::path> plot(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<RadialGraph> shapes;
    const fs::path snap_dir = path / "snapshots";
    if (fs::is_directory(snap_dir)) {
      std::vector<fs::path> snaps;
      for (const auto& e : fs::directory_iterator(snap_dir))
        if (e.path().extension() == ".snap") snaps.push_back(e.path());
      std::sort(snaps.begin(), snaps.end());
      if (!snaps.empty()) {
        shapes.push_back(read_snapshot(read_file(snaps.front())).graph);
        if (snaps.size() > 1) shapes.push_back(read_snapshot(read_file(snaps.back())).graph);
      }
    }
    return write_plots(path / "plots", parse_series_csv(read_file(path / "series.csv")), shapes);
  }
  if (path.extension() == ".snap") {
    const auto snap = read_snapshot(read_file(path));
    fs::path out = path;
    out.replace_extension(".svg");
    write_atomic(out, shape_svg({snap.graph}));
    return {out};
  }
  const auto dir = path.has_parent_path() ? path.parent_path() / "plots" : fs::path("plots");
  return write_plots(dir, parse_series_csv(read_file(path)), {});
}

namespace {

struct VerifyCase {
  std::string name;
  FlowConfig config;
  bool expect_pass = true;
};

FlowConfig base(DimensionMode mode, Variant variant, double alpha, int N) {
  FlowConfig c;
  c.mode = mode;
  c.variant = variant;
  c.alpha = alpha;
  c.N = N;
  return c;
}

std::vector<VerifyCase> verify_cases(bool quick) {
  using enum DimensionMode;
  using enum Variant;
  std::vector<VerifyCase> cases;

  auto exact = base(Planar, VolumePreserving, 1.0, 201);
  cases.push_back({"exact_cap_planar", exact});
  auto exact_axi = base(Axisymmetric, AreaPreserving, 2.0, 101);
  exact_axi.theta = kPi / 2;
  cases.push_back({"exact_cap_axisymmetric", exact_axi});

  auto perturbed = base(Planar, VolumePreserving, 1.0, 201);
  perturbed.perturbations = {{2, 0.05}};
  cases.push_back({"perturbed_planar_volume", perturbed});

  if (!quick) {
    auto area = perturbed;
    area.variant = AreaPreserving;
    cases.push_back({"perturbed_planar_area", area});
    auto half = perturbed;
    half.alpha = 0.5;
    cases.push_back({"perturbed_planar_alpha_0.5", half});
    auto axi = base(Axisymmetric, VolumePreserving, 1.0, 201);
    axi.perturbations = {{1, 0.05}};
    cases.push_back({"perturbed_axisymmetric_volume", axi});
  }

  auto unstable = perturbed;
  unstable.cfl_safety = 5.0;
  cases.push_back({"negative_control_cfl5", unstable, false});
  return cases;
}

}  // namespace

std::vector<VerifyLine> verify(bool quick) {
  std::vector<VerifyLine> lines;
  for (const auto& vc : verify_cases(quick)) {
    SuiteReport suite;
    try {
      const auto result = diagnostics::run(vc.config);
      suite = diagnostics::assert_suite(result.series, vc.config);
    } catch (const std::exception& e) {
      // A run that cannot even start is a failure of the expected-pass cases
      // and says nothing about suite sensitivity for the negative control.
      lines.push_back({vc.name + ".run", false, -1.0, e.what()});
      continue;
    }
    if (vc.expect_pass) {
      for (const auto& c : suite.checks) lines.push_back({vc.name + "." + c.name, c.passed, c.margin, c.detail});
    } else {
      double worst = std::numeric_limits<double>::infinity();
      std::string failing;
      for (const auto& c : suite.checks) {
        worst = std::min(worst, c.margin);
        if (!c.passed) failing += (failing.empty() ? "" : " ") + c.name;
      }
      lines.push_back({vc.name + ".suite_detects_failure", !suite.passed(), -worst,
                       failing.empty() ? "no check failed" : "failed: " + failing});
    }
  }
  return lines;
}

}  // namespace capflow::cli
