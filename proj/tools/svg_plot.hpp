#pragma once

#include <string>
#include <vector>

namespace misinfo::cli {

/// Minimal static line chart: mean curves with translucent ±σ bands.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(std::vector<double> xs, std::vector<double> ys,
                std::string color, std::string label);
  /// Shaded region between lower and upper, drawn beneath the lines.
  void add_band(std::vector<double> xs, std::vector<double> lower,
                std::vector<double> upper, std::string color);
  /// Vertical dashed marker, e.g. the chosen ε.
  void add_marker(double x, std::string color, std::string label);

  std::string render(int width = 720, int height = 480) const;

 private:
  struct Line {
    std::vector<double> xs, ys;
    std::string color, label;
  };
  struct Band {
    std::vector<double> xs, lower, upper;
    std::string color;
  };
  struct Marker {
    double x;
    std::string color, label;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Line> lines_;
  std::vector<Band> bands_;
  std::vector<Marker> markers_;
};

/// Evenly spaced "nice" tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace misinfo::cli
