#include "fairlens/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fairlens/error.hpp"
#include "fairlens/kernels.hpp"

namespace fairlens {
namespace {

Tensor3 run_conv(const ConvLayer& conv, const Tensor3& in, const Shape3& out_shape,
                 const kernels::KernelTable& k) {
  Tensor3 out(out_shape);
  const auto pad = static_cast<std::ptrdiff_t>(conv.padding);
  const auto in_h = static_cast<std::ptrdiff_t>(in.shape.height);
  const auto in_w = static_cast<std::ptrdiff_t>(in.shape.width);
  const auto out_w = static_cast<std::ptrdiff_t>(out_shape.width);
  const auto stride = static_cast<std::ptrdiff_t>(conv.stride);

  for (std::size_t oc = 0; oc < conv.out_channels; ++oc) {
    for (std::size_t ic = 0; ic < conv.in_channels; ++ic) {
      for (std::size_t ky = 0; ky < conv.kernel_h; ++ky) {
        for (std::size_t kx = 0; kx < conv.kernel_w; ++kx) {
          const double w = conv.weight(oc, ic, ky, kx);
          const auto off_x = static_cast<std::ptrdiff_t>(kx) - pad;
          // Output columns whose tap lands inside the input row.
          std::ptrdiff_t ox_begin = 0;
          if (off_x < 0) ox_begin = (-off_x + stride - 1) / stride;
          std::ptrdiff_t ox_end = out_w;
          if (in_w - off_x <= 0) {
            ox_end = 0;
          } else {
            ox_end = std::min(out_w, (in_w - off_x - 1) / stride + 1);
          }
          if (ox_begin >= ox_end) continue;

          for (std::size_t oy = 0; oy < out_shape.height; ++oy) {
            const std::ptrdiff_t iy =
                static_cast<std::ptrdiff_t>(oy) * stride + static_cast<std::ptrdiff_t>(ky) - pad;
            if (iy < 0 || iy >= in_h) continue;
            const double* src =
                in.values.data() + (ic * in.shape.height + static_cast<std::size_t>(iy)) * in.shape.width;
            double* dst = &out.at(oc, oy, 0);
            if (stride == 1) {
              k.axpy(w, src + ox_begin + off_x, dst + ox_begin,
                     static_cast<std::size_t>(ox_end - ox_begin));
            } else {
              for (std::ptrdiff_t ox = ox_begin; ox < ox_end; ++ox) {
                dst[ox] = dst[ox] + w * src[ox * stride + off_x];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor3 run_maxpool(const MaxPoolLayer& pool, const Tensor3& in, const Shape3& out_shape) {
  Tensor3 out(out_shape);
  for (std::size_t c = 0; c < out_shape.channels; ++c) {
    for (std::size_t oy = 0; oy < out_shape.height; ++oy) {
      for (std::size_t ox = 0; ox < out_shape.width; ++ox) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t dy = 0; dy < pool.window; ++dy) {
          for (std::size_t dx = 0; dx < pool.window; ++dx) {
            m = std::max(m, in.at(c, oy * pool.stride + dy, ox * pool.stride + dx));
          }
        }
        out.at(c, oy, ox) = m;
      }
    }
  }
  return out;
}

Tensor3 run_gap(const Tensor3& in) {
  Tensor3 out(Shape3{in.shape.channels, 1, 1});
  const std::size_t plane = in.shape.height * in.shape.width;
  for (std::size_t c = 0; c < in.shape.channels; ++c) {
    double s = 0.0;
    for (std::size_t p = 0; p < plane; ++p) s += in.values[c * plane + p];
    out.values[c] = s / static_cast<double>(plane);
  }
  return out;
}

Tensor3 run_fc(const FullyConnectedLayer& fc, const Tensor3& in,
               const kernels::KernelTable& k) {
  Tensor3 out(Shape3{fc.out_features, 1, 1});
  for (std::size_t o = 0; o < fc.out_features; ++o) {
    out.values[o] =
        fc.bias[o] + k.dot(&fc.weights[o * fc.in_features], in.values.data(), fc.in_features);
  }
  return out;
}

}  // namespace

Grid Tensor3::channel(std::size_t c) const {
  const std::size_t plane = shape.height * shape.width;
  const auto first = values.begin() + static_cast<std::ptrdiff_t>(c * plane);
  return Grid(shape.width, shape.height,
              std::vector<double>(first, first + static_cast<std::ptrdiff_t>(plane)));
}

ImageTensor::ImageTensor(Tensor3 data) : data_(std::move(data)) {
  if (data_.shape.channels != 3 || data_.shape.height == 0 || data_.shape.width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "image tensor must be 3 x H x W");
  }
  if (data_.values.size() != data_.shape.size()) {
    throw Error(ErrorCode::kInvalidArgument, "image tensor value count mismatch");
  }
  for (double v : data_.values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "image values must be finite and in [0,1]");
    }
  }
}

ImageTensor::ImageTensor(std::size_t height, std::size_t width, double fill)
    : ImageTensor(Tensor3(Shape3{3, height, width}, fill)) {}

ImageTensor flip_horizontal(const ImageTensor& img) {
  Tensor3 out(img.tensor().shape);
  const std::size_t w = img.width();
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < w; ++x) out.at(c, y, x) = img(c, y, w - 1 - x);
    }
  }
  return ImageTensor(std::move(out));
}

ImageTensor apply_mask(const ImageTensor& img, const Grid& mask) {
  if (mask.width() != img.width() || mask.height() != img.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask size does not match image");
  }
  Tensor3 out(img.tensor().shape);
  const auto m = mask.values();
  const std::size_t plane = m.size();
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t p = 0; p < plane; ++p) {
      out.values[c * plane + p] = std::clamp(img.tensor().values[c * plane + p] * m[p], 0.0, 1.0);
    }
  }
  return ImageTensor(std::move(out));
}

ForwardResult forward(const ToyModelSpec& spec, const Tensor3& input) {
  if (input.shape != spec.input_shape() || input.values.size() != input.shape.size()) {
    const Shape3& s = spec.input_shape();
    throw Error(ErrorCode::kShapeMismatch,
                "input shape mismatch: model expects " + std::to_string(s.channels) + "x" +
                    std::to_string(s.height) + "x" + std::to_string(s.width));
  }
  const auto& k = kernels::active();
  ForwardResult result;
  Tensor3 cur = input;
  for (std::size_t idx = 0; idx < spec.layers().size(); ++idx) {
    const Layer& layer = spec.layers()[idx];
    const Shape3& out_shape = spec.output_shape(idx);
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      cur = run_conv(*conv, cur, out_shape, k);
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      k.relu(cur.values.data(), cur.values.size());
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
      cur = run_maxpool(*pool, cur, out_shape);
    } else if (std::holds_alternative<GlobalAvgPoolLayer>(layer)) {
      cur = run_gap(cur);
    } else if (const auto* fc = std::get_if<FullyConnectedLayer>(&layer)) {
      cur = run_fc(*fc, cur, k);
    }
    cur.shape = out_shape;
    if (idx == spec.target_layer_index()) {
      result.target_activations.reserve(cur.shape.channels);
      for (std::size_t c = 0; c < cur.shape.channels; ++c) {
        result.target_activations.push_back(cur.channel(c));
      }
    }
  }
  result.embedding = std::move(cur.values);
  return result;
}

}  // namespace fairlens
