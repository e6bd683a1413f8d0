#include "fairlens/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "byte_io.hpp"
#include "fairlens/error.hpp"
#include "fairlens/png_io.hpp"
#include "fairlens/scores_csv.hpp"
#include "json.hpp"

namespace fairlens {
namespace {

namespace fs = std::filesystem;

std::vector<double> random_weights(Rng& rng, std::size_t n, double scale) {
  std::vector<double> w(n);
  for (double& v : w) v = static_cast<float>(rng.normal(0.0, scale));
  return w;
}

struct Look {
  double skin;
  double warm;
  double eye_gap;
  double mouth_width;
  double face_ry;
};

Look look_for(Ethnicity e) {
  switch (e) {
    case Ethnicity::kCaucasian: return {0.86, 0.06, 15.0, 14.0, 48.0};
    case Ethnicity::kEastAsian: return {0.78, 0.10, 17.0, 12.0, 45.0};
    case Ethnicity::kIndian: return {0.62, 0.08, 16.0, 13.0, 47.0};
    case Ethnicity::kAfrican: return {0.42, 0.05, 16.0, 16.0, 49.0};
    case Ethnicity::kUnknown: break;
  }
  return {0.7, 0.07, 16.0, 14.0, 47.0};
}

double sq(double v) { return v * v; }

}  // namespace

double Rng::normal(double mean, double stddev) {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ToyModelSpec make_demo_model(std::uint64_t seed) {
  Rng rng(seed);
  ConvLayer c1{4, 3, 5, 5, 1, 2, random_weights(rng, 4 * 3 * 5 * 5, 0.15)};
  ConvLayer c2{8, 4, 3, 3, 1, 1, random_weights(rng, 8 * 4 * 3 * 3, 0.3)};
  FullyConnectedLayer fc{16, 8, random_weights(rng, 16 * 8, 0.5), random_weights(rng, 16, 0.1)};
  return ToyModelSpec::create(kFaceInputShape,
                              {c1, ReluLayer{}, MaxPoolLayer{4, 4}, c2, ReluLayer{},
                               GlobalAvgPoolLayer{}, fc});
}

ImageTensor make_synthetic_face(const Demographics& who, std::uint64_t seed) {
  Rng rng(seed);
  const Look look = look_for(who.ethnicity);
  const double cx = 56.0 + rng.uniform(-2.0, 2.0);
  const double cy = 58.0 + rng.uniform(-2.0, 2.0);
  const double rx = 37.0 + rng.uniform(-2.0, 2.0) + (who.gender == Gender::kMale ? 1.5 : 0.0);
  const double ry = look.face_ry + rng.uniform(-2.0, 2.0);
  const double eye_y = cy - 12.0 + rng.uniform(-1.5, 1.5);
  const double eye_gap = look.eye_gap + rng.uniform(-1.0, 1.0);
  const double mouth_y = cy + 24.0 + rng.uniform(-2.0, 2.0);
  const double mouth_w = look.mouth_width + rng.uniform(-2.0, 2.0);
  const double skin = std::clamp(look.skin + rng.uniform(-0.05, 0.05), 0.0, 1.0);
  const double bg = rng.uniform(0.15, 0.3);

  Tensor3 t(Shape3{3, kFaceSize, kFaceSize});
  for (std::size_t y = 0; y < kFaceSize; ++y) {
    for (std::size_t x = 0; x < kFaceSize; ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      double v = bg;
      double warm = 0.0;
      if (sq((fx - cx) / rx) + sq((fy - cy) / ry) <= 1.0) {
        v = skin;
        warm = look.warm;
        const double eye_r = 4.5;
        if (sq(fx - (cx - eye_gap)) + sq(fy - eye_y) <= sq(eye_r) ||
            sq(fx - (cx + eye_gap)) + sq(fy - eye_y) <= sq(eye_r)) {
          v = 0.08;
          warm = 0.0;
        }
        if (std::abs(fx - cx) <= 2.5 && fy > eye_y + 6.0 && fy < mouth_y - 8.0) v *= 0.8;
        if (std::abs(fy - mouth_y) <= 2.0 && std::abs(fx - cx) <= mouth_w) {
          v = 0.35 * skin;
          warm = 0.15;
        }
      }
      const double noise = rng.uniform(-0.02, 0.02);
      t.at(0, y, x) = std::clamp(v + warm + noise, 0.0, 1.0);
      t.at(1, y, x) = std::clamp(v + noise, 0.0, 1.0);
      t.at(2, y, x) = std::clamp(v - warm + noise, 0.0, 1.0);
    }
  }
  return ImageTensor(std::move(t));
}

ComparisonScoreSet make_synthetic_scores(const std::vector<GroupScoreModel>& groups,
                                         std::uint64_t seed) {
  Rng rng(seed);
  ComparisonScoreSet set;
  for (const auto& g : groups) {
    for (std::size_t k = 0; k < g.genuine; ++k) {
      set.entries.push_back({g.group + "-g" + std::to_string(k), g.group, PairKind::kGenuine,
                             rng.normal(g.genuine_mean, g.stddev)});
    }
    for (std::size_t k = 0; k < g.imposter; ++k) {
      set.entries.push_back({g.group + "-i" + std::to_string(k), g.group, PairKind::kImposter,
                             rng.normal(g.imposter_mean, g.stddev)});
    }
  }
  return set;
}

DemoDataset write_demo_dataset(const std::string& root, std::size_t images_per_group,
                               std::uint64_t seed) {
  fs::create_directories(fs::path(root) / "images");
  DemoDataset d;
  d.root = fs::absolute(root).lexically_normal().string();
  d.model_path = (fs::path(d.root) / "model.tmdl").string();
  d.image_list = (fs::path(d.root) / "images.csv").string();
  d.scores_path = (fs::path(d.root) / "scores.csv").string();
  d.manifest_path = (fs::path(d.root) / "manifest.json").string();

  save_model_file(make_demo_model(seed), d.model_path);

  std::ofstream list(d.image_list, std::ios::trunc);
  if (!list) throw Error(ErrorCode::kIo, "cannot write " + d.image_list);
  list << "path,ethnicity,gender\n";
  std::uint64_t image_seed = seed * 1000;
  for (Ethnicity e : {Ethnicity::kCaucasian, Ethnicity::kEastAsian}) {
    for (std::size_t k = 0; k < images_per_group; ++k) {
      const Demographics who{e, k % 2 == 0 ? Gender::kMale : Gender::kFemale};
      const std::string name = std::string(tag(e)) + "_" + std::to_string(k) + ".png";
      const auto bytes = encode_png(to_rgb_image(make_synthetic_face(who, ++image_seed)));
      detail::write_file_bytes((fs::path(d.root) / "images" / name).string(), bytes);
      list << "images/" << name << ',' << tag(e) << ',' << tag(who.gender) << '\n';
    }
  }
  list.close();

  // 60k imposters per group resolve targets down to 1e-5 on the pooled set.
  const auto scores = make_synthetic_scores(
      {{"C-C", 3000, 60000, 0.72, 0.10, 0.09}, {"E-E", 3000, 60000, 0.68, 0.14, 0.10}},
      seed + 1);
  write_scores_csv_file(scores, d.scores_path);

  nlohmann::ordered_json manifest{
      {"dataset", "demo"},
      {"model", "toy"},
      {"cohorts",
       {{{"label", "C"}, {"archive", "amaps.amap"}, {"filter", {{"ethnicity", "C"}}}},
        {{"label", "E"}, {"archive", "amaps.amap"}, {"filter", {{"ethnicity", "E"}}}}}},
      {"scores", "scores.csv"},
      {"reference", "C"},
      {"overlay_image", "images/C_0.png"},
      {"output_dir", "out"},
  };
  std::ofstream out(d.manifest_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + d.manifest_path);
  out << manifest.dump(2) << '\n';
  return d;
}

}  // namespace fairlens
