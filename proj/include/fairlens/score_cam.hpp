#pragma once

// Score-CAM over the toy CNN.
//
// For each channel A_k of the target layer: upsample to the input size,
// min-max normalise, mask the input with it, and score the masked input by
// comparing its embedding with the unmasked embedding. Softmax over the
// scores gives the channel weights; the map is ReLU(sum_k w_k * up(A_k)),
// min-max normalised to [0, 1].

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fairlens/activation_map.hpp"
#include "fairlens/forward.hpp"
#include "fairlens/grid.hpp"
#include "fairlens/model.hpp"

namespace fairlens {

// Scalar that drives the channel re-weighting, given the embedding of the
// masked input and of the original input.
using ChannelScorer =
    std::function<double(std::span<const double> masked, std::span<const double> original)>;

// Cosine similarity; 0 when the masked embedding is the zero vector.
// Throws kUndefinedScore when the original embedding is the zero vector.
double cosine_similarity(std::span<const double> masked, std::span<const double> original);

std::vector<double> softmax(std::span<const double> scores);

struct ScoreCamOptions {
  ChannelScorer scorer = cosine_similarity;
};

struct ScoreCamTrace {
  Grid cam;
  std::vector<Grid> upsampled;  // up(A_k)
  std::vector<double> channel_scores;
  std::vector<double> weights;
};

ScoreCamTrace score_cam_trace(const ToyModelSpec& spec, const ImageTensor& img,
                              const ScoreCamOptions& options = {});

Grid score_cam(const ToyModelSpec& spec, const ImageTensor& img,
               const ScoreCamOptions& options = {});

// (score_cam(img) + flip(score_cam(flip(img)))) / 2, clamped to [0, 1].
Grid score_cam_symmetrized(const ToyModelSpec& spec, const ImageTensor& img,
                           const ScoreCamOptions& options = {});

struct FaceSample {
  std::string sample_id;
  ImageTensor image;
  Demographics demographics;
};

// One symmetrised map per sample, in input order, computed on up to
// `threads` workers (0 = hardware concurrency).
std::vector<ActivationMap> score_cam_batch(const ToyModelSpec& spec,
                                           std::span<const FaceSample> samples,
                                           std::size_t threads = 1,
                                           const ScoreCamOptions& options = {});

}  // namespace fairlens
