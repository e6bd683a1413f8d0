#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fairlens::detail {

struct Series {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool step = false;  // draw as a histogram staircase (x holds bin edges)
};

struct PlotLayout {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<std::pair<double, double>> y_range;
  // Replaces the numeric x ticks when non-empty.
  std::vector<std::pair<double, std::string>> x_ticks;
};

std::string render_line_plot(const PlotLayout& layout, std::span<const Series> series);

// printf-style "%.17g", locale independent for the C locale we run in.
std::string exact(double v);

}  // namespace fairlens::detail
