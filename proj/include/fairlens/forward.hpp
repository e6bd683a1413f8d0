#pragma once

#include <cstddef>
#include <vector>

#include "fairlens/grid.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

// Channel-major (C x H x W) activation tensor.
struct Tensor3 {
  Shape3 shape;
  std::vector<double> values;

  Tensor3() = default;
  explicit Tensor3(Shape3 s, double fill = 0.0) : shape(s), values(s.size(), fill) {}

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return values[(c * shape.height + y) * shape.width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * shape.height + y) * shape.width + x];
  }

  Grid channel(std::size_t c) const;
};

// RGB image with values in [0, 1], stored channel-major.
class ImageTensor {
 public:
  // Throws kInvalidArgument unless the shape has 3 channels and every value
  // is finite and inside [0, 1].
  explicit ImageTensor(Tensor3 data);
  ImageTensor(std::size_t height, std::size_t width, double fill);

  std::size_t height() const noexcept { return data_.shape.height; }
  std::size_t width() const noexcept { return data_.shape.width; }
  const Tensor3& tensor() const noexcept { return data_; }

  double operator()(std::size_t c, std::size_t y, std::size_t x) const {
    return data_.at(c, y, x);
  }

  friend bool operator==(const ImageTensor& a, const ImageTensor& b) {
    return a.data_.shape == b.data_.shape && a.data_.values == b.data_.values;
  }

 private:
  Tensor3 data_;
};

ImageTensor flip_horizontal(const ImageTensor& img);

// img * mask, mask broadcast over the colour channels.
ImageTensor apply_mask(const ImageTensor& img, const Grid& mask);

struct ForwardResult {
  std::vector<double> embedding;
  // One grid per channel of the target layer's output.
  std::vector<Grid> target_activations;
};

ForwardResult forward(const ToyModelSpec& spec, const Tensor3& input);
inline ForwardResult forward(const ToyModelSpec& spec, const ImageTensor& img) {
  return forward(spec, img.tensor());
}

}  // namespace fairlens
