#include "fairlens/score_cam.hpp"

#include <algorithm>
#include <cmath>

#include "fairlens/error.hpp"
#include "fairlens/kernels.hpp"
#include "fairlens/parallel.hpp"

namespace fairlens {

double cosine_similarity(std::span<const double> masked, std::span<const double> original) {
  if (masked.size() != original.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding lengths differ");
  }
  double dot = 0.0;
  double nm = 0.0;
  double no = 0.0;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    dot += masked[i] * original[i];
    nm += masked[i] * masked[i];
    no += original[i] * original[i];
  }
  if (!(no > 0.0)) {
    throw Error(ErrorCode::kUndefinedScore,
                "original embedding is zero; cosine channel score is undefined");
  }
  if (!(nm > 0.0)) return 0.0;
  return dot / (std::sqrt(nm) * std::sqrt(no));
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) return {};
  const double peak = *std::max_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    w[k] = std::exp(scores[k] - peak);
    sum += w[k];
  }
  for (double& v : w) v /= sum;
  return w;
}

ScoreCamTrace score_cam_trace(const ToyModelSpec& spec, const ImageTensor& img,
                              const ScoreCamOptions& options) {
  const ForwardResult base = forward(spec, img);
  const std::size_t h = img.height();
  const std::size_t w = img.width();

  ScoreCamTrace trace;
  trace.upsampled.reserve(base.target_activations.size());
  trace.channel_scores.reserve(base.target_activations.size());
  for (const Grid& channel : base.target_activations) {
    Grid up = bilinear_resize(channel, w, h);
    const ImageTensor masked = apply_mask(img, minmax_normalize(up));
    const ForwardResult masked_out = forward(spec, masked);
    trace.channel_scores.push_back(options.scorer(masked_out.embedding, base.embedding));
    trace.upsampled.push_back(std::move(up));
  }
  trace.weights = softmax(trace.channel_scores);

  Grid combined(w, h);
  const auto& k = kernels::active();
  for (std::size_t c = 0; c < trace.upsampled.size(); ++c) {
    k.axpy(trace.weights[c], trace.upsampled[c].values().data(), combined.values().data(),
           combined.size());
  }
  trace.cam = minmax_normalize(relu(std::move(combined)));
  return trace;
}

Grid score_cam(const ToyModelSpec& spec, const ImageTensor& img,
               const ScoreCamOptions& options) {
  return score_cam_trace(spec, img, options).cam;
}

Grid score_cam_symmetrized(const ToyModelSpec& spec, const ImageTensor& img,
                           const ScoreCamOptions& options) {
  const Grid direct = score_cam(spec, img, options);
  const Grid mirrored = flip_horizontal(score_cam(spec, flip_horizontal(img), options));
  Grid sum = add(direct, mirrored);
  for (double& v : sum.values()) v *= 0.5;
  return clamp(std::move(sum), 0.0, 1.0);
}

std::vector<ActivationMap> score_cam_batch(const ToyModelSpec& spec,
                                           std::span<const FaceSample> samples,
                                           std::size_t threads,
                                           const ScoreCamOptions& options) {
  std::vector<ActivationMap> maps(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const FaceSample& s = samples[i];
    maps[i] = ActivationMap{s.sample_id, score_cam_symmetrized(spec, s.image, options),
                            s.demographics};
  });
  return maps;
}

}  // namespace fairlens
