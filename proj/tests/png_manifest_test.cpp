#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "fairlens/error.hpp"
#include "fairlens/manifest.hpp"
#include "fairlens/png_io.hpp"
#include "test_util.hpp"

namespace fairlens {
namespace {

using testing::TempDir;

void write_png(const std::string& path, const RgbImage& img) {
  const auto bytes = encode_png(img);
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                              static_cast<std::streamsize>(bytes.size()));
}

RgbImage filled(std::size_t w, std::size_t h, std::uint8_t v) {
  RgbImage img(w, h);
  std::fill(img.pixels.begin(), img.pixels.end(), v);
  return img;
}

TEST(Png, RoundTripAndDeterminism) {
  RgbImage img(5, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 17);
  const auto a = encode_png(img);
  EXPECT_EQ(a, encode_png(img));
  EXPECT_EQ(decode_png(a), img);
  EXPECT_THROW(decode_png(std::vector<std::uint8_t>{1, 2, 3}), Error);
}

TEST(Png, FaceLoading) {
  TempDir dir("png");
  write_png(dir / "white.png", filled(kFaceSize, kFaceSize, 255));
  const ImageTensor white = load_face_image(dir / "white.png");
  for (double v : white.tensor().values) EXPECT_EQ(v, 1.0);

  write_png(dir / "mid.png", filled(kFaceSize, kFaceSize, 128));
  EXPECT_NEAR(load_face_image(dir / "mid.png")(1, 5, 5), 0.50196, 1e-5);
  EXPECT_EQ(load_face_image(dir / "mid.png")(1, 5, 5), 128.0 / 255.0);

  write_png(dir / "small.png", filled(100, 100, 10));
  try {
    load_face_image(dir / "small.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("small.png"), std::string::npos);
  }
  testing::spit(dir / "fake.png", "not a png");
  try {
    load_face_image(dir / "fake.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported);
  }
}

TEST(Png, TensorConversionRoundTrips) {
  RgbImage img(4, 4);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 5);
  EXPECT_EQ(to_rgb_image(to_image_tensor(img)), img);
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::spit(dir / "a.amap", "x");
    testing::spit(dir / "scores.csv", "pair_id,group,kind,score\n");
    unsetenv(kOutputDirEnv);
  }
  void TearDown() override { unsetenv(kOutputDirEnv); }
  TempDir dir{"manifest"};
};

TEST_F(ManifestTest, ParsesAndResolvesPaths) {
  const auto m = parse_manifest(R"({
    "dataset": "bfw", "model": "r100",
    "cohorts": [
      {"label": "C", "archive": "a.amap", "filter": {"ethnicity": "C"}},
      {"label": "f", "archive": "a.amap", "filter": {"ethnicity": "E", "gender": "f"}},
      {"label": "any", "archive": "a.amap"}
    ],
    "scores": "scores.csv", "reference": "C"})",
                                dir.path().string());
  EXPECT_EQ(m.dataset, "bfw");
  EXPECT_EQ(m.model, "r100");
  ASSERT_EQ(m.cohorts.size(), 3u);
  EXPECT_EQ(m.cohorts[0].archive, dir / "a.amap");
  EXPECT_EQ(m.cohorts[1].filter.gender, Gender::kFemale);
  EXPECT_TRUE(m.cohorts[2].filter.matches({Ethnicity::kAfrican, Gender::kUnknown}));
  EXPECT_FALSE(m.cohorts[1].filter.matches({Ethnicity::kEastAsian, Gender::kMale}));
  EXPECT_EQ(*m.scores, dir / "scores.csv");
  EXPECT_NE(m.find("f"), nullptr);
  EXPECT_EQ(m.find("zzz"), nullptr);
}

TEST_F(ManifestTest, ValidationErrors) {
  const std::string base = dir.path().string();
  auto fails = [&](const std::string& json, const std::string& needle) {
    try {
      parse_manifest(json, base);
      ADD_FAILURE() << "accepted: " << json;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  fails(R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap"}],"reference":"E"})", "E");
  fails(R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap"},{"label":"C","archive":"a.amap"}],"reference":"C"})", "C");
  fails(R"({"dataset":"d","cohorts":[{"label":"C","archive":"missing.amap"}],"reference":"C"})", "missing.amap");
  fails(R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap"}],"reference":"C","scores":"nope.csv"})", "nope.csv");
  fails(R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap","filter":{"ethnicity":"Q"}}],"reference":"C"})", "Q");
  fails(R"({"cohorts":[]})", "dataset");
  fails("{not json", "JSON");
}

TEST_F(ManifestTest, OutputDirPrecedence) {
  const auto m = parse_manifest(
      R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap"}],"reference":"C"})",
      dir.path().string());
  EXPECT_EQ(resolve_output_dir(m, std::nullopt), dir / "fairlens_out");
  setenv(kOutputDirEnv, "/tmp/env_out", 1);
  EXPECT_EQ(resolve_output_dir(m, std::nullopt), "/tmp/env_out");
  auto with_dir = m;
  with_dir.output_dir = dir / "from_manifest";
  EXPECT_EQ(resolve_output_dir(with_dir, std::nullopt), dir / "from_manifest");
  EXPECT_EQ(resolve_output_dir(with_dir, std::string("/tmp/cli")), "/tmp/cli");
}

TEST_F(ManifestTest, LoadFromFileUsesItsDirectory) {
  testing::spit(dir / "m.json",
                R"({"dataset":"d","cohorts":[{"label":"C","archive":"a.amap"}],"reference":"C","output_dir":"o"})");
  const auto m = load_manifest(dir / "m.json");
  EXPECT_EQ(resolve_output_dir(m, std::nullopt), dir / "o");
  try {
    load_manifest(dir / "absent.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("absent.json"), std::string::npos);
  }
}

}  // namespace
}  // namespace fairlens
