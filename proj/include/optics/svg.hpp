#pragma once

/**
 * @file svg.hpp
 * @brief Deterministic SVG 1.1 figures of scenes, traced paths and sweep curves.
 *
 * Only rect, polygon and polyline elements with stroke/fill attributes are
 * emitted. Scene coordinates are y-up; the flip to SVG's y-down happens when
 * coordinates are written, so no transform attribute is needed.
 */

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "optics/medium.hpp"
#include "optics/scenarios.hpp"
#include "optics/scene.hpp"
#include "optics/serialize.hpp"
#include "optics/tracer.hpp"

namespace optics {

struct StyleMap {
  std::map<double, std::string> wavelength_colors{
      {650.0, "#e41a1c"}, {610.0, "#ff7f00"}, {580.0, "#ffd700"}, {550.0, "#2ca02c"},
      {470.0, "#1f5fff"}, {440.0, "#4b0082"}, {410.0, "#8f00ff"},
  };
  std::map<std::string, std::string> medium_fills{
      {"glass", "#b8dcef"}, {"water", "#6fa8dc"}, {"crown", "#cfe8f5"}, {"flint", "#a9c8e8"}, {"plate", "#b8dcef"},
  };
  std::string default_fill = "#d0d0d0";
  std::string background_fill = "#ffffff";
  std::string outline = "#404040";
  double element_stroke = 0.01;
  double ray_stroke = 0.015;

  /// Color of the nearest table entry; total over every wavelength.
  std::string color_for(Wavelength lambda) const {
    std::string best = "#000000";
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [nm, color] : wavelength_colors) {
      const double d = std::abs(nm - lambda.nm());
      if (d < best_d) {
        best_d = d;
        best = color;
      }
    }
    return best;
  }

  std::string fill_for(const std::string& medium) const {
    const auto it = medium_fills.find(medium);
    return it == medium_fills.end() ? default_fill : it->second;
  }
};

namespace detail {

class SvgWriter {
 public:
  SvgWriter(double min_x, double min_y, double max_x, double max_y) : min_y_(min_y), max_y_(max_y) {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << format_number(min_x) << ' '
         << format_number(min_y) << ' ' << format_number(max_x - min_x) << ' ' << format_number(max_y - min_y)
         << "\" width=\"" << format_number(800.0) << "\" height=\""
         << format_number(800.0 * (max_y - min_y) / (max_x - min_x)) << "\">\n";
  }

  // Quantize before flipping so already-serialized inputs render identically.
  std::string point(Vec2 p) const { return format_number(p.x) + "," + format_number(flip(quantize(p.y))); }

  void rect(double x0, double y0, double x1, double y1, const std::string& fill, const std::string& stroke,
            double width) {
    out_ << "  <rect x=\"" << format_number(x0) << "\" y=\"" << format_number(flip(y1)) << "\" width=\""
         << format_number(x1 - x0) << "\" height=\"" << format_number(y1 - y0) << "\" fill=\"" << fill
         << "\" stroke=\"" << stroke << "\" stroke-width=\"" << format_number(width) << "\"/>\n";
  }

  void polygon(const std::vector<Vec2>& pts, const std::string& fill, const std::string& stroke, double width) {
    out_ << "  <polygon points=\"" << join(pts) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << format_number(width) << "\"/>\n";
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width) {
    out_ << "  <polyline points=\"" << join(pts) << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
         << format_number(width) << "\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  double flip(double y) const { return min_y_ + max_y_ - y; }
  std::string join(const std::vector<Vec2>& pts) const {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + point(pts[i]);
    return s;
  }

  std::ostringstream out_;
  double min_y_;
  double max_y_;
};

}  // namespace detail

/// One polygon per element, one polyline per path; the bounds are the viewport.
inline std::string to_svg(const SceneDoc& scene, const std::vector<RayPath>& paths, const StyleMap& style = {}) {
  const Bounds& b = scene.bounds;
  detail::SvgWriter svg(b.min_x, b.min_y, b.max_x, b.max_y);
  svg.rect(b.min_x, b.min_y, b.max_x, b.max_y, style.background_fill, "none", 0.0);
  for (const auto& e : scene.elements) {
    svg.polygon(e.world_shape().vertices(), style.fill_for(e.medium), style.outline, style.element_stroke);
  }
  for (const auto& p : paths) {
    if (p.segments.empty()) continue;
    std::vector<Vec2> pts{p.segments.front().start};
    for (const auto& s : p.segments) pts.push_back(s.end);
    svg.polyline(pts, style.color_for(p.lambda), style.ray_stroke);
  }
  return svg.finish();
}

/// Red-to-violet spread versus incidence, in degrees; rows with fewer than
/// two exiting colors break the curve.
inline std::string spread_curve_svg(const std::vector<SweepRow>& rows) {
  double x0 = 0.0, x1 = 90.0, y1 = 1.0;
  if (!rows.empty()) {
    x0 = rad_to_deg(rows.front().incidence);
    x1 = std::max(x0 + 1.0, rad_to_deg(rows.back().incidence));
  }
  for (const auto& r : rows) {
    if (r.spread) y1 = std::max(y1, rad_to_deg(*r.spread));
  }
  y1 = std::ceil(y1);
  const double pad_x = 0.05 * (x1 - x0);
  const double pad_y = 0.05 * y1;
  detail::SvgWriter svg(x0 - pad_x, -pad_y, x1 + pad_x, y1 + pad_y);
  svg.rect(x0, 0.0, x1, y1, "#ffffff", "#404040", 0.002 * (x1 - x0));
  const double stroke = 0.004 * (x1 - x0);
  std::vector<Vec2> run;
  const auto flush = [&] {
    if (run.size() >= 2) svg.polyline(run, "#8f00ff", stroke);
    run.clear();
  };
  for (const auto& r : rows) {
    if (r.spread) run.push_back({rad_to_deg(r.incidence), rad_to_deg(*r.spread)});
    else flush();
  }
  flush();
  return svg.finish();
}

}  // namespace optics
