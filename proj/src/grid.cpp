#include "fairlens/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairlens/error.hpp"
#include "fairlens/kernels.hpp"

namespace fairlens {
namespace {

void require_same_shape(const Grid& a, const Grid& b, const char* op) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(op) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                    "x" + std::to_string(b.height()));
  }
}

// a + t * (b - a), kept inside [min(a,b), max(a,b)].
double lerp_bounded(double a, double b, double t) {
  if (a == b) return a;
  const double v = a + t * (b - a);
  return std::clamp(v, std::min(a, b), std::max(a, b));
}

struct Sample {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

std::vector<Sample> corner_aligned_samples(std::size_t in, std::size_t out) {
  std::vector<Sample> samples(out);
  const double scale =
      out > 1 ? static_cast<double>(in - 1) / static_cast<double>(out - 1) : 0.0;
  for (std::size_t k = 0; k < out; ++k) {
    const double pos = static_cast<double>(k) * scale;
    auto lo = static_cast<std::size_t>(std::floor(pos));
    lo = std::min(lo, in - 1);
    const std::size_t hi = std::min(lo + 1, in - 1);
    samples[k] = {lo, hi, hi == lo ? 0.0 : pos - static_cast<double>(lo)};
  }
  return samples;
}

}  // namespace

Grid::Grid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
  if (!std::isfinite(fill)) {
    throw Error(ErrorCode::kInvalidArgument, "grid fill value is not finite");
  }
}

Grid::Grid(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width_ * height_) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid of " + std::to_string(width_) + "x" + std::to_string(height_) +
                    " needs " + std::to_string(width_ * height_) + " values, got " +
                    std::to_string(values_.size()));
  }
  validate();
}

Grid Grid::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t h = rows.size();
  const std::size_t w = h == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(w * h);
  for (const auto& r : rows) {
    if (r.size() != w) {
      throw Error(ErrorCode::kInvalidArgument, "ragged rows in grid literal");
    }
    values.insert(values.end(), r.begin(), r.end());
  }
  return Grid(w, h, std::move(values));
}

void Grid::validate() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite grid value at row " + std::to_string(k / width_) +
                      ", column " + std::to_string(k % width_));
    }
  }
}

Grid flip_horizontal(const Grid& g) {
  Grid out(g.width(), g.height());
  for (std::size_t i = 0; i < g.height(); ++i) {
    const auto src = g.row(i);
    std::reverse_copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Grid mirror_average(const Grid& g) {
  Grid out(g.width(), g.height());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < g.height(); ++i) {
    k.mirror_average_row(g.row(i).data(), out.row(i).data(), g.width());
  }
  return out;
}

Grid bilinear_resize(const Grid& g, std::size_t out_width, std::size_t out_height) {
  if (out_width == 0 || out_height == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bilinear_resize: output size must be >= 1");
  }
  if (g.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bilinear_resize: empty input grid");
  }
  if (out_width == g.width() && out_height == g.height()) return g;

  const auto xs = corner_aligned_samples(g.width(), out_width);
  const auto ys = corner_aligned_samples(g.height(), out_height);
  Grid out(out_width, out_height);
  for (std::size_t i = 0; i < out_height; ++i) {
    const Sample& sy = ys[i];
    for (std::size_t j = 0; j < out_width; ++j) {
      const Sample& sx = xs[j];
      const double top = lerp_bounded(g(sy.lo, sx.lo), g(sy.lo, sx.hi), sx.frac);
      const double bottom = lerp_bounded(g(sy.hi, sx.lo), g(sy.hi, sx.hi), sx.frac);
      out(i, j) = lerp_bounded(top, bottom, sy.frac);
    }
  }
  return out;
}

Grid minmax_normalize(const Grid& g) {
  Grid out(g.width(), g.height());
  if (g.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(g.values().begin(), g.values().end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) return out;
  auto dst = out.values();
  const auto src = g.values();
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[k] = std::min((src[k] - lo) / range, 1.0);
  }
  return out;
}

std::vector<double> reduce_sum_rows(const Grid& g) {
  std::vector<double> sums(g.height(), 0.0);
  for (std::size_t i = 0; i < g.height(); ++i) {
    double s = 0.0;
    for (double v : g.row(i)) s += v;
    sums[i] = s;
  }
  return sums;
}

std::vector<double> reduce_sum_cols(const Grid& g) {
  std::vector<double> sums(g.width(), 0.0);
  for (std::size_t i = 0; i < g.height(); ++i) {
    const auto r = g.row(i);
    for (std::size_t j = 0; j < g.width(); ++j) sums[j] += r[j];
  }
  return sums;
}

Grid add(const Grid& a, const Grid& b) {
  require_same_shape(a, b, "add");
  Grid out(a.width(), a.height());
  kernels::active().add(a.values().data(), b.values().data(), out.values().data(), a.size());
  return out;
}

Grid abs_diff(const Grid& a, const Grid& b) {
  require_same_shape(a, b, "abs_diff");
  Grid out(a.width(), a.height());
  kernels::active().abs_diff(a.values().data(), b.values().data(), out.values().data(),
                             a.size());
  return out;
}

Grid relu(Grid g) {
  kernels::active().relu(g.values().data(), g.size());
  return g;
}

Grid clamp(Grid g, double lo, double hi) {
  for (double& v : g.values()) v = std::clamp(v, lo, hi);
  return g;
}

double min_value(const Grid& g) {
  if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "min of empty grid");
  return *std::min_element(g.values().begin(), g.values().end());
}

double max_value(const Grid& g) {
  if (g.empty()) throw Error(ErrorCode::kInvalidArgument, "max of empty grid");
  return *std::max_element(g.values().begin(), g.values().end());
}

double total(const Grid& g) {
  double s = 0.0;
  for (double v : g.values()) s += v;
  return s;
}

}  // namespace fairlens
