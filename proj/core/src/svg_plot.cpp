#include "epsreg/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace epsreg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  double transform(double v) const { return log ? std::log10(v) : v; }
  double fraction(double v) const { return (transform(v) - lo) / (hi - lo); }
};

Axis make_axis(bool log, double lo, double hi) {
  Axis a{log, lo, hi};
  if (log) {
    a.lo = std::floor(std::log10(lo));
    a.hi = std::ceil(std::log10(hi));
  } else {
    const double pad = 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
  }
  if (a.hi <= a.lo) {
    a.lo -= 1.0;
    a.hi += 1.0;
  }
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    for (double e = a.lo; e <= a.hi + 1e-9; e += 1.0) t.push_back(std::pow(10.0, e));
    return t;
  }
  const double span = a.hi - a.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-12; v += step) t.push_back(v);
  return t;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0) &&
           (!spec.log_y || y > 0.0);
  };
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (!std::isfinite(xlo)) {
    xlo = ylo = 1.0;
    xhi = yhi = 10.0;
  }
  const Axis ax = make_axis(spec.log_x, xlo, xhi);
  const Axis ay = make_axis(spec.log_y, ylo, yhi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + ax.fraction(x) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - ay.fraction(y)) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ticks(ax)) {
    const double x = px(t);
    os << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\"" << kTop + ph
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << t << "</text>\n";
  }
  for (double t : ticks(ay)) {
    const double y = py(t);
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << t << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(spec.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << escape(spec.y_label)
     << "</text>\n";

  double legend_y = kTop + 16;
  for (const auto& s : spec.series) {
    if (s.markers) {
      for (const auto& [x, y] : s.points) {
        if (!usable(x, y)) continue;
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3.5\" fill=\"" << s.color
           << "\"/>\n";
      }
    } else {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) {
        if (usable(x, y)) os << px(x) << ',' << py(y) << ' ';
      }
      os << "\"/>\n";
    }
    os << "<text x=\"" << kLeft + 10 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
       << s.color << "\">" << escape(s.name) << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace epsreg
