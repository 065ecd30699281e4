#include "monotraj/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "monotraj/errors.hpp"

namespace monotraj {

namespace {

constexpr int kPanelSize = 360;
constexpr int kPanelPad = 46;
constexpr int kLegendHeight = 26;

const char* kPalette[] = {"#333333", "#d62728", "#1f77b4", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

double component(const Vec3& p, int axis) {
  return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
}

struct Panel {
  int ax, ay;             // data axes plotted horizontally / vertically
  const char* title;
  double x0, y0;          // top-left of the plotting area in svg units
  double amin, arange;    // data range on ax
  double bmin, brange;    // data range on ay
  double scale;           // common mm-to-px scale (equal aspect)

  double to_x(const Vec3& p) const {
    return x0 + (component(p, ax) - amin) * scale +
           (kPanelSize - arange * scale) / 2.0;
  }
  // Vertical data axis points up on screen.
  double to_y(const Vec3& p) const {
    return y0 + kPanelSize -
           ((component(p, ay) - bmin) * scale +
            (kPanelSize - brange * scale) / 2.0);
  }
};

Panel make_panel(int index, int ax, int ay, const char* title,
                 std::span<const PlotSeries> series) {
  Panel panel;
  panel.ax = ax;
  panel.ay = ay;
  panel.title = title;
  panel.x0 = kPanelPad + index * (kPanelSize + kPanelPad);
  panel.y0 = kPanelPad;

  double amin = std::numeric_limits<double>::infinity(), amax = -amin;
  double bmin = amin, bmax = -amin;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      amin = std::min(amin, component(p, ax));
      amax = std::max(amax, component(p, ax));
      bmin = std::min(bmin, component(p, ay));
      bmax = std::max(bmax, component(p, ay));
    }
  const double pad_a = std::max((amax - amin) * 0.05, 1.0);
  const double pad_b = std::max((bmax - bmin) * 0.05, 1.0);
  panel.amin = amin - pad_a;
  panel.arange = amax - amin + 2 * pad_a;
  panel.bmin = bmin - pad_b;
  panel.brange = bmax - bmin + 2 * pad_b;
  panel.scale = std::min(kPanelSize / panel.arange, kPanelSize / panel.brange);
  return panel;
}

}  // namespace

void write_trajectory_svg(const std::filesystem::path& path,
                          std::span<const PlotSeries> series) {
  bool any_points = false;
  for (const auto& s : series) any_points = any_points || !s.points.empty();
  if (series.empty() || !any_points)
    throw InvalidSpec("svg plot: no trajectory points to draw");

  const int width = 3 * kPanelSize + 4 * kPanelPad;
  const int height = kPanelSize + 2 * kPanelPad +
                     kLegendHeight * static_cast<int>(series.size());

  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  const char* axis_names[] = {"x (mm)", "y (mm)", "z (mm)"};
  const Panel panels[] = {make_panel(0, 0, 1, "X-Y", series),
                          make_panel(1, 0, 2, "X-Z", series),
                          make_panel(2, 1, 2, "Y-Z", series)};

  for (const Panel& panel : panels) {
    out << "<rect x=\"" << num(panel.x0) << "\" y=\"" << num(panel.y0)
        << "\" width=\"" << kPanelSize << "\" height=\"" << kPanelSize
        << "\" fill=\"none\" stroke=\"#999999\"/>\n";
    out << "<text x=\"" << num(panel.x0 + kPanelSize / 2.0) << "\" y=\""
        << num(panel.y0 - 10) << "\" text-anchor=\"middle\" fill=\"#333333\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << panel.title
        << "</text>\n";
    out << "<text x=\"" << num(panel.x0 + kPanelSize / 2.0) << "\" y=\""
        << num(panel.y0 + kPanelSize + 26)
        << "\" text-anchor=\"middle\" fill=\"#666666\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << axis_names[panel.ax]
        << " &#8594; ; " << axis_names[panel.ay] << " &#8593;</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
      const PlotSeries& s = series[i];
      if (s.points.empty()) continue;
      const char* color = kPalette[i % std::size(kPalette)];

      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : s.points)
        out << num(panel.to_x(p)) << "," << num(panel.to_y(p)) << " ";
      out << "\"/>\n";

      // Start: filled circle. End: cross.
      const Vec3& first = s.points.front();
      const Vec3& last = s.points.back();
      out << "<circle cx=\"" << num(panel.to_x(first)) << "\" cy=\""
          << num(panel.to_y(first)) << "\" r=\"4\" fill=\"" << color
          << "\"/>\n";
      const double ex = panel.to_x(last), ey = panel.to_y(last);
      out << "<line x1=\"" << num(ex - 4) << "\" y1=\"" << num(ey - 4)
          << "\" x2=\"" << num(ex + 4) << "\" y2=\"" << num(ey + 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
      out << "<line x1=\"" << num(ex - 4) << "\" y1=\"" << num(ey + 4)
          << "\" x2=\"" << num(ex + 4) << "\" y2=\"" << num(ey - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
  }

  // Legend below the panels.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kPanelSize + 2 * kPanelPad + kLegendHeight * i;
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<line x1=\"" << kPanelPad << "\" y1=\"" << num(ly) << "\" x2=\""
        << kPanelPad + 30 << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kPanelPad + 38 << "\" y=\"" << num(ly + 4)
        << "\" fill=\"#333333\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[i].label << "</text>\n";
  }

  out << "</svg>\n";
  if (!out.good()) throw IoFailure("write failed: " + path.string());
}

}  // namespace monotraj
