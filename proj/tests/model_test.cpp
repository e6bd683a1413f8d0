#include <gtest/gtest.h>

#include <bit>
#include <cstring>

#include "fairlens/error.hpp"
#include "fairlens/model.hpp"
#include "test_util.hpp"

namespace fairlens {
namespace {

// Little-endian byte builder written independently of the library writer.
struct Bytes {
  std::vector<std::uint8_t> b;
  Bytes& u8(std::uint8_t v) {
    b.push_back(v);
    return *this;
  }
  Bytes& u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) b.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    return *this;
  }
  Bytes& f32(float v) { return u32(std::bit_cast<std::uint32_t>(v)); }
  Bytes& text(const char* s) {
    b.insert(b.end(), s, s + std::strlen(s));
    return *this;
  }
};

// conv 1->2 2x2 (stride 1, pad 0), relu, gap, fc 2->2 over a 1x3x3 input.
ToyModelSpec small_spec() {
  return ToyModelSpec::create(
      Shape3{1, 3, 3},
      {ConvLayer{2, 1, 2, 2, 1, 0, {1, 0, 0, 1, 0.5, -0.5, 0.25, 2}}, ReluLayer{},
       GlobalAvgPoolLayer{}, FullyConnectedLayer{2, 2, {1, 2, 3, 4}, {0.5, -1}}});
}

Bytes small_spec_bytes() {
  Bytes x;
  x.text("TMDL").u32(1).u32(4);
  x.u8(1).u32(2).u32(1).u32(2).u32(2).u32(1).u32(0);
  for (float w : {1.f, 0.f, 0.f, 1.f, 0.5f, -0.5f, 0.25f, 2.f}) x.f32(w);
  x.u8(2);
  x.u8(4);
  x.u8(5).u32(2).u32(2);
  for (float w : {1.f, 2.f, 3.f, 4.f, 0.5f, -1.f}) x.f32(w);
  return x;
}

TEST(Model, WriterMatchesHandBuiltBytes) {
  EXPECT_EQ(save_model(small_spec()), small_spec_bytes().b);
}

TEST(Model, RoundTrip) {
  const auto spec = load_model(small_spec_bytes().b, Shape3{1, 3, 3});
  EXPECT_EQ(spec.layers().size(), 4u);
  EXPECT_EQ(spec.embedding_dim(), 2u);
  EXPECT_EQ(spec.target_layer_index(), 1u);
  EXPECT_EQ(spec.output_shape(0), (Shape3{2, 2, 2}));
  EXPECT_EQ(save_model(spec), small_spec_bytes().b);
}

TEST(Model, GoldenThreeLayerFile) {
  // conv 3->2 3x3 pad 1, gap, fc 2->4.
  const ToyModelSpec spec = ToyModelSpec::create(
      Shape3{3, 8, 8},
      {ConvLayer{2, 3, 3, 3, 1, 1, std::vector<double>(54, 0.125)}, GlobalAvgPoolLayer{},
       FullyConnectedLayer{4, 2, {1, 0, 0, 1, 1, 1, -1, 1}, {0, 0, 0.5, 0.25}}});
  std::string msg;
  ASSERT_TRUE(testing::golden_matches("three_layer.tmdl",
                                      testing::bytes_to_string(save_model(spec)), &msg))
      << msg;
  const auto loaded =
      load_model_file(testing::golden_path("three_layer.tmdl"), Shape3{3, 8, 8});
  ASSERT_EQ(loaded.layers().size(), 3u);
  EXPECT_EQ(layer_name(loaded.layers()[0]), "conv");
  EXPECT_EQ(layer_name(loaded.layers()[1]), "gap");
  EXPECT_EQ(layer_name(loaded.layers()[2]), "fc");
  EXPECT_EQ(loaded.embedding_dim(), 4u);
  EXPECT_EQ(loaded.target_layer_index(), 0u);
}

TEST(Model, TruncatedFile) {
  const auto full = small_spec_bytes().b;
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{10}, full.size() - 1}) {
    const std::vector<std::uint8_t> part(full.begin(), full.begin() + cut);
    try {
      load_model(part, Shape3{1, 3, 3});
      FAIL() << "accepted a file cut at " << cut;
    } catch (const Error& e) {
      if (cut >= 4) {
        EXPECT_NE(std::string(e.what()).find("unexpected end of stream"), std::string::npos) << e.what();
      }
    }
  }
}

TEST(Model, BadMagicAndVersion) {
  auto bytes = small_spec_bytes().b;
  bytes[0] = 'X';
  EXPECT_THROW(load_model(bytes, Shape3{1, 3, 3}), Error);
  bytes = small_spec_bytes().b;
  bytes[4] = 2;
  EXPECT_THROW(load_model(bytes, Shape3{1, 3, 3}), Error);
}

TEST(Model, UnsupportedTagNamesLayer) {
  Bytes x;
  x.text("TMDL").u32(1).u32(2).u8(2).u8(9);
  try {
    load_model(x.b, Shape3{1, 3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported);
    EXPECT_NE(std::string(e.what()).find("layer 1"), std::string::npos) << e.what();
  }
}

TEST(Model, ShapeMismatchNamesBothLayers) {
  // gap yields 3 features, fc expects 5.
  try {
    ToyModelSpec::create(Shape3{1, 3, 3},
                         {ConvLayer{3, 1, 2, 2, 1, 0, std::vector<double>(12, 1.0)},
                          GlobalAvgPoolLayer{},
                          FullyConnectedLayer{2, 5, std::vector<double>(10, 0.0), {0, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    const std::string m = e.what();
    EXPECT_NE(m.find("layer 1"), std::string::npos) << m;
    EXPECT_NE(m.find("layer 2"), std::string::npos) << m;
  }
  try {
    ToyModelSpec::create(Shape3{1, 3, 3},
                         {ConvLayer{3, 1, 2, 2, 1, 0, std::vector<double>(12, 1.0)},
                          FullyConnectedLayer{2, 5, std::vector<double>(10, 0.0), {0, 0}}});
    FAIL();
  } catch (const Error& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("conv"), std::string::npos) << m;
    EXPECT_NE(m.find("fc"), std::string::npos) << m;
  }
}

TEST(Model, RejectsInconsistentLayers) {
  EXPECT_THROW(ToyModelSpec::create(Shape3{1, 3, 3}, {ConvLayer{1, 2, 1, 1, 1, 0, {1, 1}}}),
               Error);
  EXPECT_THROW(ToyModelSpec::create(Shape3{1, 3, 3},
                                    {ConvLayer{1, 1, 5, 5, 1, 0, std::vector<double>(25, 1)}}),
               Error);
  EXPECT_THROW(ToyModelSpec::create(Shape3{1, 3, 3}, {ReluLayer{}}), Error);
  EXPECT_THROW(load_model(small_spec_bytes().b, Shape3{3, 3, 3}), Error);
}

TEST(Model, TrailingBytesRejected) {
  auto bytes = small_spec_bytes().b;
  bytes.push_back(0);
  EXPECT_THROW(load_model(bytes, Shape3{1, 3, 3}), Error);
}

}  // namespace
}  // namespace fairlens
