#include "fairlens/model.hpp"

#include <array>
#include <cmath>
#include <string>

#include "byte_io.hpp"
#include "fairlens/error.hpp"

namespace fairlens {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'T', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

enum Tag : std::uint8_t {
  kConvTag = 1,
  kReluTag = 2,
  kMaxPoolTag = 3,
  kGapTag = 4,
  kFcTag = 5,
};

std::string describe(std::size_t index, const Layer& layer) {
  return "layer " + std::to_string(index) + " (" + layer_name(layer) + ")";
}

std::string shape_str(const Shape3& s) {
  return std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.width);
}

[[noreturn]] void shape_error(std::size_t index, const std::vector<Layer>& layers,
                              const std::string& what) {
  std::string where = describe(index, layers[index]);
  if (index > 0) where = describe(index - 1, layers[index - 1]) + " -> " + where;
  throw Error(ErrorCode::kShapeMismatch, "shape mismatch between " + where + ": " + what);
}

}  // namespace

std::string layer_name(const Layer& layer) {
  struct Visitor {
    std::string operator()(const ConvLayer&) const { return "conv"; }
    std::string operator()(const ReluLayer&) const { return "relu"; }
    std::string operator()(const MaxPoolLayer&) const { return "maxpool"; }
    std::string operator()(const GlobalAvgPoolLayer&) const { return "gap"; }
    std::string operator()(const FullyConnectedLayer&) const { return "fc"; }
  };
  return std::visit(Visitor{}, layer);
}

ToyModelSpec ToyModelSpec::create(Shape3 input, std::vector<Layer> layers,
                                  std::optional<std::size_t> target_layer) {
  if (input.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "model input shape must be non-empty");
  }
  if (layers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "model has no layers");
  }

  ToyModelSpec spec;
  spec.input_ = input;
  spec.shapes_.reserve(layers.size());

  Shape3 cur = input;
  bool flat = false;
  std::optional<std::size_t> last_spatial;

  for (std::size_t k = 0; k < layers.size(); ++k) {
    const Layer& layer = layers[k];
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      if (flat) shape_error(k, layers, "convolution after flattening");
      if (conv->in_channels != cur.channels) {
        shape_error(k, layers, "expects " + std::to_string(conv->in_channels) +
                                   " input channels, previous output is " + shape_str(cur));
      }
      if (conv->out_channels == 0 || conv->kernel_h == 0 || conv->kernel_w == 0 ||
          conv->stride == 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    describe(k, layer) + ": zero-sized kernel, channel count or stride");
      }
      if (conv->weights.size() !=
          conv->out_channels * conv->in_channels * conv->kernel_h * conv->kernel_w) {
        throw Error(ErrorCode::kInvalidArgument, describe(k, layer) + ": weight count mismatch");
      }
      const std::size_t ph = cur.height + 2 * conv->padding;
      const std::size_t pw = cur.width + 2 * conv->padding;
      if (conv->kernel_h > ph || conv->kernel_w > pw) {
        shape_error(k, layers, "kernel larger than padded input " + shape_str(cur));
      }
      cur = {conv->out_channels, (ph - conv->kernel_h) / conv->stride + 1,
             (pw - conv->kernel_w) / conv->stride + 1};
      last_spatial = k;
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      if (!flat) last_spatial = k;
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
      if (flat) shape_error(k, layers, "max-pool after flattening");
      if (pool->window == 0 || pool->stride == 0) {
        throw Error(ErrorCode::kInvalidArgument, describe(k, layer) + ": zero window or stride");
      }
      if (pool->window > cur.height || pool->window > cur.width) {
        shape_error(k, layers, "pool window larger than input " + shape_str(cur));
      }
      cur = {cur.channels, (cur.height - pool->window) / pool->stride + 1,
             (cur.width - pool->window) / pool->stride + 1};
      last_spatial = k;
    } else if (std::holds_alternative<GlobalAvgPoolLayer>(layer)) {
      if (flat) shape_error(k, layers, "global pooling after flattening");
      cur = {cur.channels, 1, 1};
      flat = true;
    } else if (const auto* fc = std::get_if<FullyConnectedLayer>(&layer)) {
      if (fc->in_features != cur.size()) {
        shape_error(k, layers, "expects " + std::to_string(fc->in_features) +
                                   " input features, previous output " + shape_str(cur) +
                                   " flattens to " + std::to_string(cur.size()));
      }
      if (fc->out_features == 0) {
        throw Error(ErrorCode::kInvalidArgument, describe(k, layer) + ": zero output features");
      }
      if (fc->weights.size() != fc->out_features * fc->in_features ||
          fc->bias.size() != fc->out_features) {
        throw Error(ErrorCode::kInvalidArgument, describe(k, layer) + ": weight count mismatch");
      }
      cur = {fc->out_features, 1, 1};
      flat = true;
    }
    spec.shapes_.push_back(cur);
  }

  if (!flat) {
    throw Error(ErrorCode::kInvalidArgument,
                "model must end in an embedding (global pooling or fully-connected layer)");
  }
  if (target_layer) {
    const std::size_t t = *target_layer;
    if (t >= layers.size() || (last_spatial && t > *last_spatial) || !last_spatial) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target layer " + std::to_string(t) + " does not produce a spatial output");
    }
    spec.target_layer_ = t;
  } else {
    if (!last_spatial) {
      throw Error(ErrorCode::kInvalidArgument, "model has no spatial layer to explain");
    }
    spec.target_layer_ = *last_spatial;
  }
  spec.embedding_dim_ = cur.size();
  spec.layers_ = std::move(layers);
  return spec;
}

ToyModelSpec load_model(std::span<const std::uint8_t> bytes, Shape3 input) {
  detail::ByteReader in(bytes);
  for (std::uint8_t expected : kMagic) {
    if (in.u8() != expected) {
      throw Error(ErrorCode::kMalformedInput, "malformed header: bad magic, expected TMDL");
    }
  }
  const std::uint32_t version = in.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kMalformedInput,
                "malformed header: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32();

  auto read_floats = [&in](std::size_t n, std::size_t layer_index) {
    std::vector<double> out(n);
    for (double& v : out) {
      v = in.f32();
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kMalformedInput,
                    "non-finite weight in layer " + std::to_string(layer_index));
      }
    }
    return out;
  };

  std::vector<Layer> layers;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint8_t tag = in.u8();
    switch (tag) {
      case kConvTag: {
        ConvLayer conv;
        conv.out_channels = in.u32();
        conv.in_channels = in.u32();
        conv.kernel_h = in.u32();
        conv.kernel_w = in.u32();
        conv.stride = in.u32();
        conv.padding = in.u32();
        const std::size_t n =
            conv.out_channels * conv.in_channels * conv.kernel_h * conv.kernel_w;
        if (n * 4 > in.remaining()) {
          throw Error(ErrorCode::kUnexpectedEnd,
                      "unexpected end of stream in layer " + std::to_string(k) + " (conv)");
        }
        conv.weights = read_floats(n, k);
        layers.emplace_back(std::move(conv));
        break;
      }
      case kReluTag:
        layers.emplace_back(ReluLayer{});
        break;
      case kMaxPoolTag: {
        MaxPoolLayer pool;
        pool.window = in.u32();
        pool.stride = in.u32();
        layers.emplace_back(pool);
        break;
      }
      case kGapTag:
        layers.emplace_back(GlobalAvgPoolLayer{});
        break;
      case kFcTag: {
        FullyConnectedLayer fc;
        fc.out_features = in.u32();
        fc.in_features = in.u32();
        const std::size_t n = fc.out_features * fc.in_features + fc.out_features;
        if (n * 4 > in.remaining()) {
          throw Error(ErrorCode::kUnexpectedEnd,
                      "unexpected end of stream in layer " + std::to_string(k) + " (fc)");
        }
        fc.weights = read_floats(fc.out_features * fc.in_features, k);
        fc.bias = read_floats(fc.out_features, k);
        layers.emplace_back(std::move(fc));
        break;
      }
      default:
        throw Error(ErrorCode::kUnsupported, "unsupported layer tag " + std::to_string(tag) +
                                                 " at layer " + std::to_string(k));
    }
  }
  if (!in.at_end()) {
    throw Error(ErrorCode::kMalformedInput,
                std::to_string(in.remaining()) + " trailing bytes after last layer");
  }
  return ToyModelSpec::create(input, std::move(layers));
}

ToyModelSpec load_model_file(const std::string& path, Shape3 input) {
  return load_model(detail::read_file_bytes(path), input);
}

std::vector<std::uint8_t> save_model(const ToyModelSpec& spec) {
  detail::ByteWriter out;
  out.raw(kMagic);
  out.u32(kVersion);
  out.u32(static_cast<std::uint32_t>(spec.layers().size()));
  for (const Layer& layer : spec.layers()) {
    if (const auto* conv = std::get_if<ConvLayer>(&layer)) {
      out.u8(kConvTag);
      for (std::size_t v : {conv->out_channels, conv->in_channels, conv->kernel_h,
                            conv->kernel_w, conv->stride, conv->padding}) {
        out.u32(static_cast<std::uint32_t>(v));
      }
      for (double w : conv->weights) out.f32(static_cast<float>(w));
    } else if (std::holds_alternative<ReluLayer>(layer)) {
      out.u8(kReluTag);
    } else if (const auto* pool = std::get_if<MaxPoolLayer>(&layer)) {
      out.u8(kMaxPoolTag);
      out.u32(static_cast<std::uint32_t>(pool->window));
      out.u32(static_cast<std::uint32_t>(pool->stride));
    } else if (std::holds_alternative<GlobalAvgPoolLayer>(layer)) {
      out.u8(kGapTag);
    } else if (const auto* fc = std::get_if<FullyConnectedLayer>(&layer)) {
      out.u8(kFcTag);
      out.u32(static_cast<std::uint32_t>(fc->out_features));
      out.u32(static_cast<std::uint32_t>(fc->in_features));
      for (double w : fc->weights) out.f32(static_cast<float>(w));
      for (double b : fc->bias) out.f32(static_cast<float>(b));
    }
  }
  return std::move(out.bytes());
}

void save_model_file(const ToyModelSpec& spec, const std::string& path) {
  detail::write_file_bytes(path, save_model(spec));
}

}  // namespace fairlens
