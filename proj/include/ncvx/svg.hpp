#pragma once
// Self-contained SVG plots of a model projected onto a coordinate plane, in
// regularized coordinates (the marginal box is the square [-1, 1]^2).
//
// ME models are drawn exactly: the projection is the ellipse of the 2x2
// submatrix of R. MP models are drawn as the convex hull of their projected
// vertices and labeled "display hull"; that outline is a visualization only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ncvx/csv.hpp"
#include "ncvx/domain.hpp"
#include "ncvx/error.hpp"
#include "ncvx/model.hpp"

namespace ncvx {

struct Point2 {
  double x;
  double y;
  friend bool operator<(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-15) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-15) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Boundary of the projected ME domain, sampled at `count` angles.
inline std::vector<Point2> ellipse_outline(const ConvexModel& model, std::size_t i, std::size_t j,
                                           std::size_t count = 256) {
  const Matrix l = cholesky(project_2d(model, i, j));
  std::vector<Point2> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    const double c = std::cos(a);
    const double s = std::sin(a);
    out.push_back({l(0, 0) * c, l(1, 0) * c + l(1, 1) * s});
  }
  return out;
}

/// Convex hull of the MP vertices projected onto (U_i, U_j).
inline std::vector<Point2> display_hull(const ConvexModel& model, std::size_t i, std::size_t j) {
  const std::size_t n = model.dimension();
  if (i >= n || j >= n || i == j) throw Error(Errc::IndexOutOfRange, "projection indices");
  const Matrix v = parallelepiped_vertices(model);
  std::vector<Point2> pts;
  for (std::size_t k = 0; k < v.rows(); ++k) pts.push_back({v(k, i), v(k, j)});
  return convex_hull(std::move(pts));
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string polygon(const std::vector<Point2>& pts, const std::string& style) {
  std::string s = "<polygon points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    s += fmt(pts[k].x) + "," + fmt(-pts[k].y);
  }
  return s + "\" style=\"" + style + "\"/>\n";
}

inline std::string star(double x, double y, double r) {
  std::vector<Point2> pts;
  for (int k = 0; k < 10; ++k) {
    const double a = std::numbers::pi / 2.0 + k * std::numbers::pi / 5.0;
    const double rr = k % 2 == 0 ? r : 0.4 * r;
    pts.push_back({x + rr * std::cos(a), y + rr * std::sin(a)});
  }
  return polygon(pts, "fill:#d62728;stroke:none");
}

inline std::string text(double x, double y, const std::string& body, const std::string& anchor = "middle") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor +
         "\" style=\"font-family:sans-serif;font-size:0.05px;fill:#333\">" + escape_xml(body) + "</text>\n";
}

}  // namespace detail

/// SVG of the model's projection onto the (i, j) plane, zero-based indices.
/// Overlay samples are marked with circles (inside the full domain) or stars.
inline std::string projection_svg(const ConvexModel& model, std::size_t i, std::size_t j,
                                  const std::optional<SampleSet>& overlay = std::nullopt) {
  const std::size_t n = model.dimension();
  if (i >= n || j >= n || i == j) {
    throw Error(Errc::IndexOutOfRange, "projection indices (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
  }
  const bool exact = model.variant() == ModelVariant::Ellipsoid;
  const auto outline = exact ? ellipse_outline(model, i, j) : display_hull(model, i, j);
  const auto& spec = model.spec();
  const auto& xi = spec.interval(i);
  const auto& xj = spec.interval(j);

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"600\" height=\"600\">\n";
  s += "<title>" + detail::escape_xml(std::string(variant_display_name(model.variant()))) + " projection on " +
       detail::escape_xml(spec.names()[i]) + "-" + detail::escape_xml(spec.names()[j]) + "</title>\n";
  s += "<rect x=\"-1.1\" y=\"-1.1\" width=\"2.2\" height=\"2.2\" style=\"fill:#ffffff\"/>\n";
  s += "<rect x=\"-1\" y=\"-1\" width=\"2\" height=\"2\" style=\"fill:none;stroke:#999;stroke-width:0.006\"/>\n";
  s += "<line x1=\"-1\" y1=\"0\" x2=\"1\" y2=\"0\" style=\"stroke:#ccc;stroke-width:0.004\"/>\n";
  s += "<line x1=\"0\" y1=\"-1\" x2=\"0\" y2=\"1\" style=\"stroke:#ccc;stroke-width:0.004\"/>\n";
  s += detail::polygon(outline, exact ? "fill:#1f77b422;stroke:#1f77b4;stroke-width:0.008"
                                      : "fill:#2ca02c22;stroke:#2ca02c;stroke-width:0.008;stroke-dasharray:0.03,0.015");

  s += detail::text(-1.0, 1.07, format_real(xi.lower()));
  s += detail::text(1.0, 1.07, format_real(xi.upper()));
  s += detail::text(0.0, 1.07, spec.names()[i]);
  s += detail::text(-1.02, 1.0, format_real(xj.lower()), "end");
  s += detail::text(-1.02, -0.98, format_real(xj.upper()), "end");
  s += detail::text(-1.02, 0.0, spec.names()[j], "end");
  s += detail::text(0.0, -1.03, exact ? "ellipse (exact projection)" : "display hull (visualization only)");

  if (overlay) {
    const SampleSet aligned = overlay->aligned_to(spec);
    for (std::size_t k = 0; k < aligned.count(); ++k) {
      const Vector u = regularize_point(spec, aligned.row(k));
      const bool inside = model.contains(aligned.row(k)).inside;
      if (inside) {
        s += "<circle cx=\"" + detail::fmt(u[i]) + "\" cy=\"" + detail::fmt(-u[j]) +
             "\" r=\"0.015\" style=\"fill:none;stroke:#000;stroke-width:0.005\"/>\n";
      } else {
        s += detail::star(u[i], u[j], 0.03);
      }
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace ncvx
