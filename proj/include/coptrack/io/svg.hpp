#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace coptrack::io {

/// Minimal SVG line chart: axes with tick labels, polylines with optional
/// dash patterns, filled polygons for region shading. No plotting stack
/// behind it, just polyline rendering.
class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label, int width = 760,
            int height = 520);

  void add_series(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, const std::string& dash = "",
                  const std::string& label = "", double stroke_width = 1.6);
  void add_region(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& fill, double opacity, const std::string& label = "");
  void add_vline(double x, const std::string& color, const std::string& dash = "4,3",
                 const std::string& label = "");

  /// Expands the autoscaled data range (e.g. to pin y to zero).
  void include_x(double x);
  void include_y(double y);

  void write(const std::filesystem::path& path) const;

 private:
  struct Series {
    std::vector<double> x, y;
    std::string color, dash, label;
    double stroke_width;
  };
  struct Region {
    std::vector<double> x, y;
    std::string fill, label;
    double opacity;
  };
  struct VLine {
    double x;
    std::string color, dash, label;
  };

  std::string title_, x_label_, y_label_;
  int width_, height_;
  std::vector<Series> series_;
  std::vector<Region> regions_;
  std::vector<VLine> vlines_;
  double extra_x_lo_ = 0, extra_x_hi_ = 0, extra_y_lo_ = 0, extra_y_hi_ = 0;
  bool has_extra_x_ = false, has_extra_y_ = false;
};

}  // namespace coptrack::io
