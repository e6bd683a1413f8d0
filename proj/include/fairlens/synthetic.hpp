#pragma once

// Deterministic synthetic data: a small face-like image generator, a demo
// CNN, score sets with controlled per-group error offsets, and a complete
// on-disk demo dataset for the command-line pipeline. Random numbers come
// from std::mt19937_64 bits mapped by hand, so outputs are identical on
// every standard library.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairlens/activation_map.hpp"
#include "fairlens/fairness.hpp"
#include "fairlens/forward.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  // Box-Muller.
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
};

// 3 -> 4 conv 5x5 (pad 2), relu, maxpool 4, 4 -> 8 conv 3x3 (pad 1), relu,
// gap, fc 8 -> 16. Target layer is the second relu (8 channels, 28x28).
ToyModelSpec make_demo_model(std::uint64_t seed);

// Face-like 112x112 image whose geometry and tone depend on the group.
ImageTensor make_synthetic_face(const Demographics& who, std::uint64_t seed);

struct GroupScoreModel {
  std::string group;
  std::size_t genuine = 0;
  std::size_t imposter = 0;
  double genuine_mean = 0.7;
  double imposter_mean = 0.1;
  double stddev = 0.1;
};

ComparisonScoreSet make_synthetic_scores(const std::vector<GroupScoreModel>& groups,
                                         std::uint64_t seed);

struct DemoDataset {
  std::string root;
  std::string model_path;
  std::string image_list;  // CSV: path,ethnicity,gender
  std::string scores_path;
  std::string manifest_path;
};

// Writes model, images, image list, scores and a manifest (cohorts C and E,
// reference C) under `root`. Activation maps are not computed; run `cam`.
DemoDataset write_demo_dataset(const std::string& root, std::size_t images_per_group = 4,
                               std::uint64_t seed = 7);

}  // namespace fairlens
