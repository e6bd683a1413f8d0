#pragma once

// Figure output: colour-mapped heatmaps and overlays (PNG), line plots (SVG)
// with CSV twins holding exactly the plotted values. Every function is a
// pure function of its inputs; no timestamps or host data end up in files.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairlens/colormap.hpp"
#include "fairlens/fairness.hpp"
#include "fairlens/forward.hpp"
#include "fairlens/grid.hpp"
#include "fairlens/group_stats.hpp"
#include "fairlens/png_io.hpp"

namespace fairlens {

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct RenderSpec {
  std::string colormap{kDefaultColormap};
  double alpha = 0.5;
  // When unset each heatmap stretches over its own [min, max].
  std::optional<ValueRange> fixed_range;

  // Throws kInvalidArgument for alpha outside [0,1], an unknown colormap,
  // or an empty/inverted range.
  void validate() const;
};

inline constexpr const char* kReferenceColor = "#d62728";
inline constexpr const char* kComparisonColor = "#1f77b4";

RgbImage heatmap_raster(const Grid& g, const RenderSpec& spec);
// (1 - alpha) * face + alpha * colormap(g), per channel.
RgbImage overlay_raster(const ImageTensor& face, const Grid& g, const RenderSpec& spec);
// Panels left to right, separated by a 4 px white gutter.
RgbImage hstack(std::span<const RgbImage> panels);

std::vector<std::uint8_t> render_heatmap(const Grid& g, const RenderSpec& spec);
std::vector<std::uint8_t> render_overlay(const ImageTensor& face, const Grid& g,
                                         const RenderSpec& spec);

// Shared range over several grids, for side-by-side comparison panels.
ValueRange common_range(std::span<const Grid> grids);

struct PlotOutput {
  std::string svg;
  std::string csv;
};

struct ProfilePlots {
  PlotOutput s_x;
  PlotOutput s_y;
};

// Reference drawn in red, comparison in blue.
ProfilePlots render_profiles(const SpatialProfile& reference, const SpatialProfile& other,
                             const RenderSpec& spec);

struct LabeledHistogram {
  std::string label;
  Histogram histogram;
};

PlotOutput render_histograms(const LabeledHistogram& reference, const LabeledHistogram& other,
                             const std::string& title);

PlotOutput render_fdr_curve(const FairnessReport& report, const RenderSpec& spec);

}  // namespace fairlens
