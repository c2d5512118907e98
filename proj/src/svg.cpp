#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "capflow/cli.hpp"

namespace capflow::cli {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fx(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string label(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fx(w) + "\" height=\"" + fx(h) +
         "\" viewBox=\"0 0 " + fx(w) + " " + fx(h) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + fx(w) + "\" height=\"" + fx(h) + "\" fill=\"white\"/>\n";
}

struct Box {
  double x0, x1, y0, y1;
};

}  // namespace

std::string shape_svg(const std::vector<RadialGraph>& graphs) {
  std::vector<std::vector<geometry::Point2>> curves;
  for (const auto& g : graphs) {
    auto pts = geometry::node_positions(g);
    if (g.mode == DimensionMode::Axisymmetric) {
      // Full meridian section: mirror the half profile through the axis.
      std::vector<geometry::Point2> full;
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) full.push_back({it->x, it->y});
      for (size_t i = 1; i < pts.size(); ++i) full.push_back({-pts[i].x, pts[i].y});
      pts = std::move(full);
    }
    curves.push_back(std::move(pts));
  }

  Box b{0, 0, 0, 0};
  for (const auto& c : curves)
    for (const auto& p : c) {
      b.x0 = std::min(b.x0, p.x);
      b.x1 = std::max(b.x1, p.x);
      b.y1 = std::max(b.y1, p.y);
    }
  const double pad = 0.15 * std::max(b.x1 - b.x0, b.y1 - b.y0) + 1e-12;
  b.x0 -= pad;
  b.x1 += pad;
  b.y0 -= pad;
  b.y1 += pad;
  const double W = 640.0;
  const double scale = W / (b.x1 - b.x0);
  const double H = (b.y1 - b.y0) * scale;
  auto X = [&](double x) { return (x - b.x0) * scale; };
  auto Y = [&](double y) { return H - (y - b.y0) * scale; };

  std::ostringstream os;
  os << header(W, H);
  os << "<line x1=\"0\" y1=\"" << fx(Y(0)) << "\" x2=\"" << fx(W) << "\" y2=\"" << fx(Y(0))
     << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (size_t k = 0; k < curves.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curves[k]) os << fx(X(p.x)) << "," << fx(Y(p.y)) << " ";
    os << "\"/>\n";
  }

  // Contact-angle markers on the last curve: a dashed segment at the
  // prescribed angle theta, measured inside the body from the floor.
  if (!graphs.empty()) {
    const double theta = graphs.back().theta;
    const auto& c = curves.back();
    const double len = pad;
    for (const auto& [p, dir] : {std::pair{c.front(), -1.0}, std::pair{c.back(), 1.0}}) {
      const double ex = p.x - dir * len * std::cos(theta);
      const double ey = p.y + len * std::sin(theta);
      os << "<line x1=\"" << fx(X(p.x)) << "\" y1=\"" << fx(Y(p.y)) << "\" x2=\"" << fx(X(ex)) << "\" y2=\""
         << fx(Y(ey)) << "\" stroke=\"#ff7f0e\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
      os << "<circle cx=\"" << fx(X(p.x)) << "\" cy=\"" << fx(Y(p.y)) << "\" r=\"3\" fill=\"#ff7f0e\"/>\n";
    }
    os << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"12\">theta = " << label(theta)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string series_svg(const std::string& title, const std::vector<double>& t,
                       const std::vector<std::pair<std::string, std::vector<double>>>& lines) {
  const double W = 640.0, H = 400.0;
  const double left = 80, right = 20, top = 30, bottom = 40;
  Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (size_t i = 0; i < t.size(); ++i) {
    for (const auto& [name, ys] : lines) {
      if (std::isnan(ys[i]) || std::isnan(t[i])) continue;
      b.x0 = std::min(b.x0, t[i]);
      b.x1 = std::max(b.x1, t[i]);
      b.y0 = std::min(b.y0, ys[i]);
      b.y1 = std::max(b.y1, ys[i]);
    }
  }
  if (!std::isfinite(b.x0)) b = {0, 1, 0, 1};
  if (b.x1 == b.x0) b.x1 = b.x0 + 1;
  if (b.y1 == b.y0) {
    const double d = b.y0 == 0 ? 1 : 1e-6 * std::abs(b.y0);
    b.y0 -= d;
    b.y1 += d;
  }
  auto X = [&](double x) { return left + (x - b.x0) / (b.x1 - b.x0) * (W - left - right); };
  auto Y = [&](double y) { return H - bottom - (y - b.y0) / (b.y1 - b.y0) * (H - top - bottom); };

  std::ostringstream os;
  os << header(W, H);
  os << "<rect x=\"" << fx(left) << "\" y=\"" << fx(top) << "\" width=\"" << fx(W - left - right)
     << "\" height=\"" << fx(H - top - bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fx(W / 2) << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"14\">" << title << "</text>\n";
  auto text = [&](double x, double y, const std::string& s, const char* anchor) {
    os << "<text x=\"" << fx(x) << "\" y=\"" << fx(y) << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s << "</text>\n";
  };
  text(left - 4, Y(b.y1) + 4, label(b.y1), "end");
  text(left - 4, Y(b.y0) + 4, label(b.y0), "end");
  text(X(b.x0), H - bottom + 16, label(b.x0), "start");
  text(X(b.x1), H - bottom + 16, label(b.x1), "end");
  text(W / 2, H - 8, "t", "middle");

  for (size_t k = 0; k < lines.size(); ++k) {
    const auto& [name, ys] = lines[k];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 4] << "\" stroke-width=\"1.5\" points=\"" << pts
           << "\"/>\n";
      pts.clear();
    };
    for (size_t i = 0; i < t.size(); ++i) {
      if (std::isnan(ys[i])) {
        flush();
        continue;
      }
      pts += fx(X(t[i])) + "," + fx(Y(ys[i])) + " ";
    }
    flush();
    text(W - right - 4, top + 14 + 14 * k, name, "end");
    os << "<line x1=\"" << fx(W - right - 70) << "\" y1=\"" << fx(top + 10 + 14 * k) << "\" x2=\""
       << fx(W - right - 50) << "\" y2=\"" << fx(top + 10 + 14 * k) << "\" stroke=\"" << kColors[k % 4]
       << "\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace capflow::cli
