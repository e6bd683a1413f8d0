#include <gtest/gtest.h>

#include <cmath>

#include "fairlens/error.hpp"
#include "fairlens/forward.hpp"
#include "fairlens/synthetic.hpp"
#include "oracles.hpp"

namespace fairlens {
namespace {

using namespace oracles;

TEST(Forward, MatchesDirectOracleOnRandomSpecs) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const ToyModelSpec spec = random_spec(rng);
    Tensor3 x(spec.input_shape());
    for (double& v : x.values) v = rng.uniform();
    const ForwardResult r = forward(spec, x);

    Naive cur{x.values, x.shape.channels, x.shape.height, x.shape.width};
    for (std::size_t k = 0; k < spec.layers().size(); ++k) {
      cur = naive_layer(spec.layers()[k], cur);
      if (k == spec.target_layer_index()) {
        ASSERT_EQ(r.target_activations.size(), cur.c);
        for (std::size_t c = 0; c < cur.c; ++c) {
          const Grid& g = r.target_activations[c];
          ASSERT_EQ(g.height(), cur.h);
          ASSERT_EQ(g.width(), cur.w);
          for (std::size_t p = 0; p < cur.h * cur.w; ++p) {
            EXPECT_LT(std::abs(g.values()[p] - cur.v[c * cur.h * cur.w + p]), 1e-12);
          }
        }
      }
    }
    ASSERT_EQ(r.embedding.size(), spec.embedding_dim());
    for (std::size_t i = 0; i < cur.v.size(); ++i) {
      EXPECT_LT(std::abs(r.embedding[i] - cur.v[i]), 1e-12) << "trial " << trial;
    }
  }
}

TEST(Forward, IdentityConvOnConstantImage) {
  const auto spec = ToyModelSpec::create(
      Shape3{1, 5, 5}, {ConvLayer{1, 1, 1, 1, 1, 0, {1.0}}, GlobalAvgPoolLayer{},
                        FullyConnectedLayer{1, 1, {1.0}, {0.0}}});
  const auto r = forward(spec, Tensor3(Shape3{1, 5, 5}, 0.3));
  ASSERT_EQ(r.target_activations.size(), 1u);
  EXPECT_EQ(r.target_activations[0], Grid(5, 5, 0.3));
  EXPECT_DOUBLE_EQ(r.embedding[0], 0.3);
}

TEST(Forward, ZeroWeightsGiveZeroEmbedding) {
  const auto spec = ToyModelSpec::create(
      Shape3{3, 6, 6}, {ConvLayer{2, 3, 3, 3, 1, 1, std::vector<double>(54, 0.0)}, ReluLayer{},
                        GlobalAvgPoolLayer{}, FullyConnectedLayer{4, 2, std::vector<double>(8, 0.0), std::vector<double>(4, 0.0)}});
  const auto r = forward(spec, Tensor3(Shape3{3, 6, 6}, 0.8));
  EXPECT_EQ(r.embedding, std::vector<double>(4, 0.0));
}

TEST(Forward, ShapeMismatch) {
  const auto spec = make_demo_model(1);
  EXPECT_THROW(forward(spec, Tensor3(Shape3{3, 64, 64}, 0.5)), Error);
}

TEST(Forward, ImageTensorValidation) {
  EXPECT_THROW(ImageTensor(Tensor3(Shape3{1, 4, 4}, 0.5)), Error);
  EXPECT_THROW(ImageTensor(Tensor3(Shape3{3, 4, 4}, 1.5)), Error);
  const ImageTensor img(4, 4, 0.25);
  EXPECT_EQ(img(2, 3, 3), 0.25);
}

TEST(Forward, FlipAndMask) {
  Tensor3 t(Shape3{3, 2, 3});
  for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = double(i) / 20.0;
  const ImageTensor img(t);
  const ImageTensor f = flip_horizontal(img);
  EXPECT_EQ(f(1, 1, 0), img(1, 1, 2));
  EXPECT_EQ(flip_horizontal(f), img);
  const ImageTensor m = apply_mask(img, Grid(3, 2, 0.5));
  EXPECT_EQ(m(2, 1, 2), img(2, 1, 2) * 0.5);
}

}  // namespace
}  // namespace fairlens
