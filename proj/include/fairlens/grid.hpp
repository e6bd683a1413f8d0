#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fairlens {

// Side length of the aligned face crops and of every activation map.
inline constexpr std::size_t kFaceSize = 112;

// Row-major 2-D grid of finite doubles. Row index i is the vertical axis.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, double fill = 0.0);
  // Throws kInvalidArgument on size mismatch or non-finite values.
  Grid(std::size_t width, std::size_t height, std::vector<double> values);

  static Grid from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }
  double& operator()(std::size_t row, std::size_t col) {
    return values_[row * width_ + col];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * width_, width_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(values_).subspan(i * width_, width_);
  }

  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  // Re-checks the finiteness invariant after direct mutation.
  void validate() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

Grid flip_horizontal(const Grid& g);

// (g + flip_horizontal(g)) / 2, exactly mirror-symmetric.
Grid mirror_average(const Grid& g);

// Corner-aligned bilinear interpolation: output corners sample input corners.
// Each interpolation step is clamped to the span of its two inputs, so the
// result never leaves [min(g), max(g)].
Grid bilinear_resize(const Grid& g, std::size_t out_width, std::size_t out_height);

// (g - min) / (max - min); an all-zero grid when max == min.
Grid minmax_normalize(const Grid& g);

// s_y[i] = sum over columns of row i.
std::vector<double> reduce_sum_rows(const Grid& g);
// s_x[j] = sum over rows of column j.
std::vector<double> reduce_sum_cols(const Grid& g);

Grid add(const Grid& a, const Grid& b);
Grid abs_diff(const Grid& a, const Grid& b);
Grid relu(Grid g);
Grid clamp(Grid g, double lo, double hi);

double min_value(const Grid& g);
double max_value(const Grid& g);
double total(const Grid& g);

}  // namespace fairlens
