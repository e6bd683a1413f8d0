#include "fairlens/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fairlens/error.hpp"
#include "svg_plot.hpp"

namespace fairlens {
namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

ValueRange range_for(const Grid& g, const RenderSpec& spec) {
  if (spec.fixed_range) return *spec.fixed_range;
  return {min_value(g), max_value(g)};
}

double unit(double v, const ValueRange& r) {
  return r.hi > r.lo ? (v - r.lo) / (r.hi - r.lo) : 0.0;
}

std::string exponent_label(double target) {
  char buf[32];
  const double e = std::log10(target);
  if (std::abs(e - std::round(e)) < 1e-9) {
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(e)));
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", target);
  }
  return buf;
}

}  // namespace

void RenderSpec::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "overlay alpha must lie in [0, 1]");
  }
  (void)Colormap::named(colormap);
  if (fixed_range && !(fixed_range->hi > fixed_range->lo)) {
    throw Error(ErrorCode::kInvalidArgument, "fixed value range must have hi > lo");
  }
}

RgbImage heatmap_raster(const Grid& g, const RenderSpec& spec) {
  spec.validate();
  const Colormap& cmap = Colormap::named(spec.colormap);
  const ValueRange r = range_for(g, spec);
  RgbImage img(g.width(), g.height());
  for (std::size_t y = 0; y < g.height(); ++y) {
    for (std::size_t x = 0; x < g.width(); ++x) {
      const Rgb c = cmap.at(unit(g(y, x), r));
      std::uint8_t* px = img.at(x, y);
      for (std::size_t k = 0; k < 3; ++k) px[k] = to_byte(c[k]);
    }
  }
  return img;
}

RgbImage overlay_raster(const ImageTensor& face, const Grid& g, const RenderSpec& spec) {
  spec.validate();
  if (face.width() != g.width() || face.height() != g.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "overlay: face and map sizes differ");
  }
  const Colormap& cmap = Colormap::named(spec.colormap);
  const ValueRange r = range_for(g, spec);
  RgbImage img(g.width(), g.height());
  for (std::size_t y = 0; y < g.height(); ++y) {
    for (std::size_t x = 0; x < g.width(); ++x) {
      const Rgb c = cmap.at(unit(g(y, x), r));
      std::uint8_t* px = img.at(x, y);
      for (std::size_t k = 0; k < 3; ++k) {
        px[k] = to_byte((1.0 - spec.alpha) * face(k, y, x) + spec.alpha * c[k]);
      }
    }
  }
  return img;
}

RgbImage hstack(std::span<const RgbImage> panels) {
  constexpr std::size_t kGutter = 4;
  if (panels.empty()) throw Error(ErrorCode::kInvalidArgument, "no panels to stack");
  std::size_t width = 0;
  std::size_t height = 0;
  for (const auto& p : panels) {
    width += p.width;
    height = std::max(height, p.height);
  }
  width += kGutter * (panels.size() - 1);
  RgbImage out(width, height);
  std::fill(out.pixels.begin(), out.pixels.end(), 255);
  std::size_t x0 = 0;
  for (const auto& p : panels) {
    for (std::size_t y = 0; y < p.height; ++y) {
      std::copy_n(p.at(0, y), p.width * 3, out.at(x0, y));
    }
    x0 += p.width + kGutter;
  }
  return out;
}

std::vector<std::uint8_t> render_heatmap(const Grid& g, const RenderSpec& spec) {
  return encode_png(heatmap_raster(g, spec));
}

std::vector<std::uint8_t> render_overlay(const ImageTensor& face, const Grid& g,
                                         const RenderSpec& spec) {
  return encode_png(overlay_raster(face, g, spec));
}

ValueRange common_range(std::span<const Grid> grids) {
  if (grids.empty()) throw Error(ErrorCode::kInvalidArgument, "no grids for a common range");
  ValueRange r{min_value(grids.front()), max_value(grids.front())};
  for (const auto& g : grids) {
    r.lo = std::min(r.lo, min_value(g));
    r.hi = std::max(r.hi, max_value(g));
  }
  return r;
}

ProfilePlots render_profiles(const SpatialProfile& reference, const SpatialProfile& other,
                             const RenderSpec&) {
  if (reference.s_x.size() != other.s_x.size() || reference.s_y.size() != other.s_y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "profiles of '" + reference.label + "' and '" +
                                                   other.label + "' differ in length");
  }
  auto one_axis = [&](const std::vector<double>& ref, const std::vector<double>& oth,
                      const std::string& axis, const std::string& position) {
    std::vector<double> idx(ref.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    const std::vector<detail::Series> series{
        {reference.label, kReferenceColor, idx, ref, false},
        {other.label, kComparisonColor, idx, oth, false},
    };
    const detail::PlotLayout layout{"spatial variation " + axis + ": " + other.label + " vs " +
                                        reference.label,
                                    position, axis, std::nullopt, {}};
    PlotOutput out;
    out.svg = detail::render_line_plot(layout, series);
    out.csv = "index," + reference.label + "," + other.label + "\n";
    for (std::size_t i = 0; i < ref.size(); ++i) {
      out.csv += std::to_string(i) + "," + detail::exact(ref[i]) + "," + detail::exact(oth[i]) +
                 "\n";
    }
    return out;
  };
  return ProfilePlots{one_axis(reference.s_x, other.s_x, "s_x", "column (x)"),
                      one_axis(reference.s_y, other.s_y, "s_y", "row (y)")};
}

PlotOutput render_histograms(const LabeledHistogram& reference, const LabeledHistogram& other,
                             const std::string& title) {
  auto series_of = [](const LabeledHistogram& h, const char* color) {
    std::vector<double> counts(h.histogram.counts.begin(), h.histogram.counts.end());
    return detail::Series{h.label, color, h.histogram.edges, counts, true};
  };
  const std::vector<detail::Series> series{series_of(reference, kReferenceColor),
                                           series_of(other, kComparisonColor)};
  const detail::PlotLayout layout{title, "value", "pixel count", std::nullopt, {}};
  PlotOutput out;
  out.svg = detail::render_line_plot(layout, series);
  out.csv = "group,bin,lower,upper,count\n";
  for (const auto* h : {&reference, &other}) {
    for (std::size_t b = 0; b < h->histogram.counts.size(); ++b) {
      out.csv += h->label + "," + std::to_string(b) + "," + detail::exact(h->histogram.edges[b]) +
                 "," + detail::exact(h->histogram.edges[b + 1]) + "," +
                 std::to_string(h->histogram.counts[b]) + "\n";
    }
  }
  return out;
}

PlotOutput render_fdr_curve(const FairnessReport& report, const RenderSpec&) {
  if (report.curve.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot plot an empty FDR curve");
  }
  const std::size_t n = report.curve.size();
  std::vector<double> x(n);
  std::vector<double> y(n);
  std::vector<std::pair<double, std::string>> ticks;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    y[i] = report.curve[i].fdr;
    ticks.emplace_back(x[i], exponent_label(report.curve[i].target_fmr));
  }
  const double lo = std::min(0.0, *std::min_element(y.begin(), y.end()));
  const std::vector<detail::Series> series{{"FDR", kComparisonColor, x, y, false}};
  char title[96];
  std::snprintf(title, sizeof title, "FDR over thresholds (alpha=%.3g, AUC=%.4f)", report.alpha,
                report.fdr_auc);
  const detail::PlotLayout layout{title, "tau at target FMR", "FDR",
                                  std::make_pair(lo, 1.05), ticks};
  PlotOutput out;
  out.svg = detail::render_line_plot(layout, series);
  out.csv = "target_fmr,tau,achieved_fmr,a_tau,b_tau,fdr\n";
  for (const auto& p : report.curve) {
    out.csv += detail::exact(p.target_fmr) + "," + detail::exact(p.tau) + "," +
               detail::exact(p.achieved_fmr) + "," + detail::exact(p.a_tau) + "," +
               detail::exact(p.b_tau) + "," + detail::exact(p.fdr) + "\n";
  }
  return out;
}

}  // namespace fairlens
