#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fairlens/amap.hpp"
#include "fairlens/error.hpp"
#include "fairlens/score_cam.hpp"
#include "fairlens/synthetic.hpp"
#include "test_util.hpp"

namespace fairlens {
namespace {

constexpr std::size_t N = kFaceSize;

// Channel-mean conv (K copies), relu, maxpool 4, gap, fc K->2.
ToyModelSpec brightness_model(std::size_t k) {
  return ToyModelSpec::create(
      kFaceInputShape,
      {ConvLayer{k, 3, 1, 1, 1, 0, std::vector<double>(3 * k, 1.0 / 3.0)}, ReluLayer{},
       MaxPoolLayer{4, 4}, GlobalAvgPoolLayer{},
       FullyConnectedLayer{2, k, std::vector<double>(2 * k, 1.0), {0.25, -0.5}}});
}

ImageTensor top_left_patch() {
  Tensor3 t(Shape3{3, N, N}, 0.0);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 4; y < 36; ++y)
      for (std::size_t x = 4; x < 36; ++x) t.at(c, y, x) = 1.0;
  return ImageTensor(std::move(t));
}

ToyModelSpec symmetric_model() {
  const ToyModelSpec base = make_demo_model(3);
  std::vector<Layer> layers = base.layers();
  for (Layer& l : layers) {
    if (auto* conv = std::get_if<ConvLayer>(&l)) {
      std::vector<double> w = conv->weights;
      for (std::size_t o = 0; o < conv->out_channels; ++o)
        for (std::size_t i = 0; i < conv->in_channels; ++i)
          for (std::size_t y = 0; y < conv->kernel_h; ++y)
            for (std::size_t x = 0; x < conv->kernel_w; ++x) {
              const std::size_t xm = conv->kernel_w - 1 - x;
              w[((o * conv->in_channels + i) * conv->kernel_h + y) * conv->kernel_w + x] =
                  0.5 * (conv->weight(o, i, y, x) + conv->weight(o, i, y, xm));
            }
      conv->weights = w;
    }
  }
  return ToyModelSpec::create(base.input_shape(), layers);
}

ImageTensor symmetric_face() {
  const ImageTensor f = make_synthetic_face({Ethnicity::kIndian, Gender::kFemale}, 5);
  const ImageTensor g = flip_horizontal(f);
  Tensor3 t(Shape3{3, N, N});
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t x = 0; x < N; ++x) t.at(c, y, x) = (f(c, y, x) + g(c, y, x)) / 2;
  // Exact symmetry: copy the left half onto the right.
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < N; ++y)
      for (std::size_t x = 0; x < N / 2; ++x) t.at(c, y, N - 1 - x) = t.at(c, y, x);
  return ImageTensor(std::move(t));
}

TEST(ScoreCam, CosineAndSoftmax) {
  const std::vector<double> a{1, 0}, b{0, 2}, c{3, 0}, z{0, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, c), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_EQ(cosine_similarity(z, a), 0.0);
  EXPECT_THROW(cosine_similarity(a, z), Error);
  const auto w = softmax(std::vector<double>{1000, 1000});
  EXPECT_EQ(w, (std::vector<double>{0.5, 0.5}));
  const auto v = softmax(std::vector<double>{0, std::log(3.0)});
  EXPECT_NEAR(v[0], 0.25, 1e-15);
  EXPECT_NEAR(v[1], 0.75, 1e-15);
}

TEST(ScoreCam, SingleChannel) {
  const auto spec = brightness_model(1);
  const ImageTensor img = make_synthetic_face({Ethnicity::kCaucasian, Gender::kMale}, 1);
  const auto trace = score_cam_trace(spec, img);
  ASSERT_EQ(trace.weights, std::vector<double>{1.0});
  EXPECT_EQ(trace.cam, minmax_normalize(relu(trace.upsampled[0])));
}

TEST(ScoreCam, IdenticalChannelsShareWeight) {
  const ImageTensor img = make_synthetic_face({Ethnicity::kAfrican, Gender::kMale}, 2);
  const auto one = score_cam_trace(brightness_model(1), img);
  const auto two = score_cam_trace(brightness_model(2), img);
  ASSERT_EQ(two.weights.size(), 2u);
  EXPECT_EQ(two.weights[0], 0.5);
  EXPECT_EQ(two.weights[1], 0.5);
  for (std::size_t i = 0; i < one.cam.size(); ++i) {
    EXPECT_NEAR(one.cam.values()[i], two.cam.values()[i], 1e-12);
  }
}

TEST(ScoreCam, LocalizesBrightPatch) {
  const Grid cam = score_cam(brightness_model(1), top_left_patch());
  double quadrant = 0.0;
  for (std::size_t y = 0; y < N / 2; ++y)
    for (std::size_t x = 0; x < N / 2; ++x) quadrant += cam(y, x);
  const double share = quadrant / total(cam);
  EXPECT_GE(share, 0.8);
  std::string msg;
  const std::vector<ActivationMap> maps{{"top_left", cam, {}}};
  EXPECT_TRUE(testing::golden_matches("score_cam_top_left.amap",
                                      testing::bytes_to_string(encode_amap(maps)), &msg))
      << msg;
}

TEST(ScoreCam, WeightsSumToOneAndOutputInRange) {
  const auto spec = make_demo_model(9);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto img = make_synthetic_face({Ethnicity::kEastAsian, Gender::kFemale}, 100 + s);
    const auto trace = score_cam_trace(spec, img);
    EXPECT_NEAR(std::accumulate(trace.weights.begin(), trace.weights.end(), 0.0), 1.0, 1e-12);
    EXPECT_GE(min_value(trace.cam), 0.0);
    EXPECT_LE(max_value(trace.cam), 1.0);
    const Grid sym = score_cam_symmetrized(spec, img);
    EXPECT_GE(min_value(sym), 0.0);
    EXPECT_LE(max_value(sym), 1.0);
  }
}

TEST(ScoreCam, SymmetricInputWithSymmetricModel) {
  const auto spec = symmetric_model();
  const ImageTensor img = symmetric_face();
  ASSERT_EQ(flip_horizontal(img), img);
  const Grid plain = score_cam(spec, img);
  const Grid sym = score_cam_symmetrized(spec, img);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    EXPECT_NEAR(plain.values()[i], sym.values()[i], 1e-12);
  }
}

TEST(ScoreCam, FlipEquivariance) {
  const auto spec = make_demo_model(11);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto img = make_synthetic_face({Ethnicity::kCaucasian, Gender::kFemale}, 200 + s);
    const Grid a = score_cam_symmetrized(spec, flip_horizontal(img));
    const Grid b = flip_horizontal(score_cam_symmetrized(spec, img));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a.values()[i], b.values()[i], 1e-9);
  }
}

TEST(ScoreCam, ConstantActivationsGiveZeroMap) {
  // Unpadded 1x1 convolutions keep a constant image constant in every channel.
  const auto spec = ToyModelSpec::create(
      kFaceInputShape, {ConvLayer{2, 3, 1, 1, 1, 0, {0.2, 0.3, 0.5, 0.6, 0.1, 0.3}}, ReluLayer{},
                        MaxPoolLayer{4, 4}, GlobalAvgPoolLayer{},
                        FullyConnectedLayer{2, 2, {1.0, 0.5, -0.5, 1.0}, {0.1, 0.2}}});
  const ImageTensor img(N, N, 0.6);
  EXPECT_EQ(score_cam_symmetrized(spec, img), Grid(N, N, 0.0));
}

TEST(ScoreCam, ZeroEmbeddingIsAnError) {
  const auto spec = ToyModelSpec::create(
      kFaceInputShape, {ConvLayer{1, 3, 1, 1, 1, 0, {1, 1, 1}}, ReluLayer{}, MaxPoolLayer{4, 4},
                        GlobalAvgPoolLayer{}, FullyConnectedLayer{1, 1, {0.0}, {0.0}}});
  try {
    score_cam(spec, ImageTensor(N, N, 0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUndefinedScore);
  }
}

TEST(ScoreCam, CustomScorer) {
  const auto spec = make_demo_model(12);
  const auto img = make_synthetic_face({Ethnicity::kIndian, Gender::kMale}, 3);
  ScoreCamOptions flat;
  flat.scorer = [](std::span<const double>, std::span<const double>) { return 0.0; };
  const auto trace = score_cam_trace(spec, img, flat);
  for (double w : trace.weights) EXPECT_DOUBLE_EQ(w, 1.0 / trace.weights.size());
}

TEST(ScoreCam, BatchIndependentOfThreadCount) {
  const auto spec = make_demo_model(13);
  std::vector<FaceSample> samples;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Demographics who{s % 2 ? Ethnicity::kEastAsian : Ethnicity::kCaucasian, Gender::kMale};
    samples.push_back({"s" + std::to_string(s), make_synthetic_face(who, 300 + s), who});
  }
  const auto one = score_cam_batch(spec, samples, 1);
  const auto four = score_cam_batch(spec, samples, 4);
  ASSERT_EQ(one.size(), 5u);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one[3].sample_id, "s3");
  EXPECT_EQ(one[3].demographics.ethnicity, Ethnicity::kEastAsian);
  EXPECT_EQ(one[3].grid, score_cam_symmetrized(spec, samples[3].image));
}

}  // namespace
}  // namespace fairlens
