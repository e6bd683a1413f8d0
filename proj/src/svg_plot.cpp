#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fairlens/error.hpp"

namespace fairlens::detail {
namespace {

constexpr double kWidth = 560.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;
constexpr int kTicks = 5;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::pair<double, double> padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

std::string text(double x, double y, const std::string& anchor, const std::string& body,
                 double size = 11.0, const std::string& extra = "") {
  return "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y) + "\" text-anchor=\"" +
         anchor + "\" font-family=\"monospace\" font-size=\"" + fmt("%.0f", size) + "\"" +
         extra + ">" + escape(body) + "</text>\n";
}

}  // namespace

std::string exact(double v) { return fmt("%.17g", v); }

std::string render_line_plot(const PlotLayout& layout, std::span<const Series> series) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : series) {
    for (double x : s.x) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
    }
    for (double y : s.y) {
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo) || !std::isfinite(y_lo)) {
    throw Error(ErrorCode::kInvalidArgument, "plot has no data points");
  }
  if (!(x_hi > x_lo)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  auto [yl, yh] = layout.y_range ? *layout.y_range : padded(y_lo, y_hi);
  const Frame f{x_lo, x_hi, yl, yh};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
         "\" height=\"" + fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " +
         fmt("%.0f", kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += text(kWidth / 2, 20, "middle", layout.title, 13);

  // Axes box.
  svg += "<rect x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kTop) + "\" width=\"" +
         fmt("%.2f", kWidth - kLeft - kRight) + "\" height=\"" +
         fmt("%.2f", kHeight - kTop - kBottom) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const double base = kHeight - kBottom;
  if (layout.x_ticks.empty()) {
    for (int t = 0; t <= kTicks; ++t) {
      const double x = x_lo + (x_hi - x_lo) * t / kTicks;
      svg += "<line x1=\"" + fmt("%.2f", f.px(x)) + "\" y1=\"" + fmt("%.2f", base) +
             "\" x2=\"" + fmt("%.2f", f.px(x)) + "\" y2=\"" + fmt("%.2f", base + 4) +
             "\" stroke=\"black\"/>\n";
      svg += text(f.px(x), base + 16, "middle", fmt("%.3g", x));
    }
  } else {
    for (const auto& [x, label] : layout.x_ticks) {
      svg += "<line x1=\"" + fmt("%.2f", f.px(x)) + "\" y1=\"" + fmt("%.2f", base) +
             "\" x2=\"" + fmt("%.2f", f.px(x)) + "\" y2=\"" + fmt("%.2f", base + 4) +
             "\" stroke=\"black\"/>\n";
      svg += text(f.px(x), base + 16, "middle", label);
    }
  }
  for (int t = 0; t <= kTicks; ++t) {
    const double y = yl + (yh - yl) * t / kTicks;
    svg += "<line x1=\"" + fmt("%.2f", kLeft - 4) + "\" y1=\"" + fmt("%.2f", f.py(y)) +
           "\" x2=\"" + fmt("%.2f", kLeft) + "\" y2=\"" + fmt("%.2f", f.py(y)) +
           "\" stroke=\"black\"/>\n";
    svg += text(kLeft - 6, f.py(y) + 4, "end", fmt("%.3g", y));
  }
  svg += text(kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 10, "middle", layout.x_label);
  svg += text(14, kTop + (kHeight - kTop - kBottom) / 2, "middle", layout.y_label, 11,
              " transform=\"rotate(-90 14 " + fmt("%.2f", kTop + (kHeight - kTop - kBottom) / 2) +
                  ")\"");

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    std::string points;
    auto add = [&](double x, double y) {
      if (!points.empty()) points += ' ';
      points += fmt("%.3f", f.px(x)) + "," + fmt("%.3f", f.py(y));
    };
    if (s.step) {
      for (std::size_t i = 0; i < s.y.size(); ++i) {
        add(s.x[i], s.y[i]);
        add(s.x[i + 1], s.y[i]);
      }
    } else {
      for (std::size_t i = 0; i < s.y.size(); ++i) add(s.x[i], s.y[i]);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 14 + 14 * static_cast<double>(k);
    const double lx = kWidth - kRight - 110;
    svg += "<line x1=\"" + fmt("%.2f", lx) + "\" y1=\"" + fmt("%.2f", ly - 4) + "\" x2=\"" +
           fmt("%.2f", lx + 16) + "\" y2=\"" + fmt("%.2f", ly - 4) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    svg += text(lx + 20, ly, "start", s.name);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fairlens::detail
