#pragma once

// Toy CNN description and its TMDL binary encoding.
//
// TMDL layout (all integers u32 little-endian, weights float32 little-endian):
//   "TMDL" | version=1 | layer_count | layer...
//   layer = u8 tag, then
//     1 conv    : out_c, in_c, kernel_h, kernel_w, stride, padding, weights[out_c][in_c][kh][kw]
//     2 relu    : -
//     3 maxpool : window, stride
//     4 gap     : -
//     5 fc      : out_features, in_features, weights[out][in], bias[out]
//
// The input shape is not stored in the file; it is supplied at load time
// (3x112x112 for face crops).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fairlens {

struct Shape3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return channels * height * width; }
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

inline constexpr Shape3 kFaceInputShape{3, 112, 112};

struct ConvLayer {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t stride = 1;
  std::size_t padding = 0;
  // [out][in][kh][kw]
  std::vector<double> weights;

  double weight(std::size_t oc, std::size_t ic, std::size_t ky, std::size_t kx) const {
    return weights[((oc * in_channels + ic) * kernel_h + ky) * kernel_w + kx];
  }
};

struct ReluLayer {};

struct MaxPoolLayer {
  std::size_t window = 2;
  std::size_t stride = 2;
};

struct GlobalAvgPoolLayer {};

struct FullyConnectedLayer {
  std::size_t out_features = 0;
  std::size_t in_features = 0;
  // [out][in]
  std::vector<double> weights;
  std::vector<double> bias;
};

using Layer =
    std::variant<ConvLayer, ReluLayer, MaxPoolLayer, GlobalAvgPoolLayer, FullyConnectedLayer>;

std::string layer_name(const Layer& layer);

// Validated, immutable network description.
class ToyModelSpec {
 public:
  // Checks shape consistency layer by layer. When `target_layer` is not given,
  // the last layer with spatial output (before global pooling or the first
  // fully-connected layer) is used.
  static ToyModelSpec create(Shape3 input, std::vector<Layer> layers,
                             std::optional<std::size_t> target_layer = std::nullopt);

  const Shape3& input_shape() const noexcept { return input_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  // Output shape of layer k; flat outputs are reported as {n, 1, 1}.
  const Shape3& output_shape(std::size_t k) const { return shapes_.at(k); }
  std::size_t embedding_dim() const noexcept { return embedding_dim_; }
  std::size_t target_layer_index() const noexcept { return target_layer_; }

 private:
  Shape3 input_;
  std::vector<Layer> layers_;
  std::vector<Shape3> shapes_;
  std::size_t embedding_dim_ = 0;
  std::size_t target_layer_ = 0;
};

ToyModelSpec load_model(std::span<const std::uint8_t> bytes,
                        Shape3 input = kFaceInputShape);
ToyModelSpec load_model_file(const std::string& path, Shape3 input = kFaceInputShape);

// Weights are narrowed to float32.
std::vector<std::uint8_t> save_model(const ToyModelSpec& spec);
void save_model_file(const ToyModelSpec& spec, const std::string& path);

}  // namespace fairlens
