#ifndef RESUMFEM_SVG_HPP
#define RESUMFEM_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resumfem/errors.hpp"

namespace resumfem {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  bool log_y = false;
  int width = 800;
  int height = 600;
};

namespace detail {

inline std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace detail

/// Standalone deterministic SVG with polylines per series; log-y optional
/// with decade gridlines.
inline std::string render_plot(const std::vector<PlotSeries>& series,
                               const PlotOptions& opt = {}) {
  if (series.empty()) throw Error("render_plot: no series");
  for (const auto& s : series)
    if (s.x.empty() || s.x.size() != s.y.size())
      throw Error("render_plot: empty or mismatched series");

  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (!(xmax >= xmin)) throw Error("render_plot: no plottable points");
  if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
  if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return mt + ph * (1.0 - (ty(y) - ymin) / (ymax - ymin)); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    svg << "<text x=\"" << opt.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << opt.title << "</text>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y gridlines: decades when log, 5 ticks otherwise
  if (opt.log_y) {
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
      const double yy = mt + ph * (1.0 - (d - ymin) / (ymax - ymin));
      svg << "<line x1=\"" << ml << "\" y1=\"" << yy << "\" x2=\"" << ml + pw
          << "\" y2=\"" << yy << "\" stroke=\"#dddddd\"/>\n";
      svg << "<text x=\"" << ml - 8 << "\" y=\"" << yy + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e"
          << d << "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double v = ymin + (ymax - ymin) * i / 5.0;
      const double yy = mt + ph * (1.0 - static_cast<double>(i) / 5.0);
      svg << "<line x1=\"" << ml << "\" y1=\"" << yy << "\" x2=\"" << ml + pw
          << "\" y2=\"" << yy << "\" stroke=\"#dddddd\"/>\n";
      svg << "<text x=\"" << ml - 8 << "\" y=\"" << yy + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << detail::fmt6(v) << "</text>\n";
    }
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = xmin + (xmax - xmin) * i / 5.0;
    const double xx = ml + pw * i / 5.0;
    svg << "<text x=\"" << xx << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::fmt6(v) << "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    svg << "<polyline fill=\"none\" stroke=\"" << colors[si % 8]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
      svg << detail::fmt6(px(s.x[i])) << ',' << detail::fmt6(py(s.y[i])) << ' ';
    }
    svg << "\"/>\n";
    if (!s.label.empty())
      svg << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 16 * si
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colors[si % 8]
          << "\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
                      const PlotOptions& opt = {}) {
  const std::string content = render_plot(series, opt);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  f << content;
  if (!f) throw IoError("write failed: " + path);
}

} // namespace resumfem

#endif
