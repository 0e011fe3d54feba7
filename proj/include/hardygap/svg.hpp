#pragma once
// Minimal standalone SVG line plots for report artifacts: minimizer profiles,
// log-log decay fits, refinement-convergence curves.  No dependencies; output
// is a complete SVG document string.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hardygap/report.hpp"

namespace hardygap {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 440;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Renders the series as polylines with linear or log axes.  Points that are
/// non-finite (or non-positive on a log axis) are dropped.
inline std::string svg_line_plot(const std::vector<PlotSeries>& series,
                                 const PlotOptions& opt) {
  static const char* kColors[] = {"#1f6fb2", "#c23b22", "#2e8b57",
                                  "#8860b2", "#b8860b", "#444444"};
  const double ml = 70, mr = 20, mt = 36, mb = 48;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

  auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!opt.log_x || x > 0.0) &&
           (!opt.log_y || y > 0.0);
  };

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      const double u = tx(x), v = ty(y);
      if (first) {
        x0 = x1 = u;
        y0 = y1 = v;
        first = false;
      }
      x0 = std::min(x0, u);
      x1 = std::max(x1, u);
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (x1 - x0 < 1e-300) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-300) y1 = y0 + 1.0;
  const double ypad = 0.05 * (y1 - y0);
  y0 -= ypad;
  y1 += ypad;

  auto px = [&](double u) { return ml + (u - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + (y1 - v) / (y1 - y0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " +
         std::to_string(opt.width) + " " + std::to_string(opt.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail::svg_num(ml) + "\" y=\"22\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + detail::xml_escape(opt.title) + "</text>\n";

  // Axes box and ticks with labels.
  svg += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) +
         "\" width=\"" + detail::svg_num(pw) + "\" height=\"" +
         detail::svg_num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fu = x0 + (x1 - x0) * i / nticks;
    const double fv = y0 + (y1 - y0) * i / nticks;
    const double gx = px(fu), gy = py(fv);
    const double lx = opt.log_x ? std::pow(10.0, fu) : fu;
    const double ly = opt.log_y ? std::pow(10.0, fv) : fv;
    char lab[32];
    std::snprintf(lab, sizeof lab, "%.3g", lx);
    svg += "<line x1=\"" + detail::svg_num(gx) + "\" y1=\"" +
           detail::svg_num(mt + ph) + "\" x2=\"" + detail::svg_num(gx) +
           "\" y2=\"" + detail::svg_num(mt + ph + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + detail::svg_num(gx) + "\" y=\"" +
           detail::svg_num(mt + ph + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" + lab + "</text>\n";
    std::snprintf(lab, sizeof lab, "%.3g", ly);
    svg += "<line x1=\"" + detail::svg_num(ml - 5) + "\" y1=\"" +
           detail::svg_num(gy) + "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" +
           detail::svg_num(gy) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" +
           detail::svg_num(gy + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">" + lab + "</text>\n";
  }
  svg += "<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
         detail::svg_num(static_cast<double>(opt.height) - 8) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">" + detail::xml_escape(opt.x_label) +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " + detail::svg_num(mt + ph / 2) + ")\">" +
         detail::xml_escape(opt.y_label) + "</text>\n";

  // Series polylines and legend.
  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kColors[si % 6];
    std::string pts;
    for (const auto& [x, y] : series[si].points) {
      if (!usable(x, y)) continue;
      pts += detail::svg_num(px(tx(x))) + "," + detail::svg_num(py(ty(y))) + " ";
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    if (!series[si].label.empty()) {
      const double lyy = mt + 16 + 16 * static_cast<double>(si);
      svg += "<line x1=\"" + detail::svg_num(ml + pw - 110) + "\" y1=\"" +
             detail::svg_num(lyy - 4) + "\" x2=\"" +
             detail::svg_num(ml + pw - 90) + "\" y2=\"" +
             detail::svg_num(lyy - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
      svg += "<text x=\"" + detail::svg_num(ml + pw - 84) + "\" y=\"" +
             detail::svg_num(lyy) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" +
             detail::xml_escape(series[si].label) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hardygap
