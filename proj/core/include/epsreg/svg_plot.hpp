#pragma once

#include <string>
#include <utility>
#include <vector>

namespace epsreg {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
  bool markers = true;  // false draws a polyline
  std::string color = "#1f77b4";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG document. Nonpositive values are dropped on log axes.
std::string render_svg(const PlotSpec& spec);

}  // namespace epsreg
