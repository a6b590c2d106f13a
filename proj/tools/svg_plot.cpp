#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "misinfo/error.hpp"

namespace misinfo::cli {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidInput("plot series lengths differ");
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) hi = lo + 1.0;
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step;
       t += step) {
    ticks.push_back(t);
  }
  return ticks;
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgPlot::add_line(std::vector<double> xs, std::vector<double> ys,
                       std::string color, std::string label) {
  require_same_length(xs.size(), ys.size());
  lines_.push_back({std::move(xs), std::move(ys), std::move(color),
                    std::move(label)});
}

void SvgPlot::add_band(std::vector<double> xs, std::vector<double> lower,
                       std::vector<double> upper, std::string color) {
  require_same_length(xs.size(), lower.size());
  require_same_length(xs.size(), upper.size());
  bands_.push_back(
      {std::move(xs), std::move(lower), std::move(upper), std::move(color)});
}

void SvgPlot::add_marker(double x, std::string color, std::string label) {
  markers_.push_back({x, std::move(color), std::move(label)});
}

std::string SvgPlot::render(int width, int height) const {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  auto grow_x = [&](double v) {
    if (std::isfinite(v)) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
  };
  auto grow_y = [&](double v) {
    if (std::isfinite(v)) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  };
  for (const auto& l : lines_) {
    for (double v : l.xs) grow_x(v);
    for (double v : l.ys) grow_y(v);
  }
  for (const auto& b : bands_) {
    for (double v : b.xs) grow_x(v);
    for (double v : b.lower) grow_y(v);
    for (double v : b.upper) grow_y(v);
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
  const std::vector<double> xt = nice_ticks(x_lo, x_hi);
  const std::vector<double> yt = nice_ticks(y_lo, y_hi);
  x_lo = std::min(x_lo, xt.front());
  x_hi = std::max(x_hi, xt.back());
  y_lo = std::min(y_lo, yt.front());
  y_hi = std::max(y_hi, yt.back());
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  const double left = 70, right = width - 185.0, top = 40, bottom = height - 55.0;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (right - left); };
  auto py = [&](double y) { return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(title_) << "</text>\n";

  for (double t : xt) {
    svg << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(top) << "\" x2=\""
        << fmt(px(t)) << "\" y2=\"" << fmt(bottom)
        << "\" stroke=\"#e6e6e6\"/>\n";
    svg << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(bottom + 16)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : yt) {
    svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(t)) << "\" x2=\""
        << fmt(right) << "\" y2=\"" << fmt(py(t))
        << "\" stroke=\"#e6e6e6\"/>\n";
    svg << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(t) + 4)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
      << fmt(right - left) << "\" height=\"" << fmt(bottom - top)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
  svg << "<text transform=\"translate(18," << (top + bottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_)
      << "</text>\n";

  for (const auto& b : bands_) {
    svg << "<polygon fill=\"" << b.color
        << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < b.xs.size(); ++i) {
      svg << fmt(px(b.xs[i])) << ',' << fmt(py(b.upper[i])) << ' ';
    }
    for (std::size_t i = b.xs.size(); i-- > 0;) {
      svg << fmt(px(b.xs[i])) << ',' << fmt(py(b.lower[i])) << ' ';
    }
    svg << "\"/>\n";
  }
  for (const auto& l : lines_) {
    svg << "<polyline fill=\"none\" stroke=\"" << l.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < l.xs.size(); ++i) {
      if (!std::isfinite(l.xs[i]) || !std::isfinite(l.ys[i])) continue;
      svg << fmt(px(l.xs[i])) << ',' << fmt(py(l.ys[i])) << ' ';
    }
    svg << "\"/>\n";
  }
  for (const auto& m : markers_) {
    if (!std::isfinite(m.x)) continue;
    svg << "<line x1=\"" << fmt(px(m.x)) << "\" y1=\"" << fmt(top) << "\" x2=\""
        << fmt(px(m.x)) << "\" y2=\"" << fmt(bottom) << "\" stroke=\""
        << m.color << "\" stroke-dasharray=\"5,4\"/>\n";
  }

  double legend_y = top + 10;
  auto legend = [&](const std::string& color, const std::string& label,
                    bool dashed) {
    svg << "<line x1=\"" << fmt(right + 12) << "\" y1=\"" << fmt(legend_y)
        << "\" x2=\"" << fmt(right + 36) << "\" y2=\"" << fmt(legend_y)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n";
    svg << "<text x=\"" << fmt(right + 42) << "\" y=\"" << fmt(legend_y + 4)
        << "\">" << escape(label) << "</text>\n";
    legend_y += 20;
  };
  for (const auto& l : lines_) legend(l.color, l.label, false);
  for (const auto& m : markers_) legend(m.color, m.label, true);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace misinfo::cli
