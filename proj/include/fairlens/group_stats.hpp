#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairlens/activation_map.hpp"
#include "fairlens/grid.hpp"

namespace fairlens {

inline constexpr std::size_t kMinCohortSize = 2;
inline constexpr std::size_t kDefaultHistogramBins = 64;

// Activation maps of one demographic group. When the label is a known
// demographic tag ("C", "E", "I", "A", "m", "f"), every map must carry it.
struct Cohort {
  std::string label;
  std::vector<ActivationMap> maps;

  std::size_t size() const noexcept { return maps.size(); }
};

// Throws kCohortTooSmall (N < 2), kDimensionMismatch, or kInvalidArgument
// (label disagrees with a map's demographics).
void validate_cohort(const Cohort& cohort);

struct CohortStatistics {
  std::string label;
  std::size_t count = 0;
  Grid mam;  // per-pixel mean
  Grid amv;  // per-pixel population standard deviation
};

// Per-pixel mean, accumulated over maps in cohort order. Pixels where every
// map agrees yield that value exactly.
Grid compute_mam(const Cohort& cohort);

// sqrt((1/N) * sum_k (a_k - mam)^2) per pixel.
Grid compute_amv(const Cohort& cohort, const Grid& mam);

CohortStatistics compute_statistics(const Cohort& cohort);

// mirror_average(|a.amv - b.amv|)
Grid compute_damv(const CohortStatistics& a, const CohortStatistics& b);

struct SpatialProfile {
  std::string label;
  std::vector<double> s_x;  // column sums (integrated over the vertical axis)
  std::vector<double> s_y;  // row sums (integrated over the horizontal axis)
};

SpatialProfile compute_spatial_profile(const Grid& amv, std::string label);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges spanning [0, max(g)]
  std::vector<std::size_t> counts;
};

// Uniform bins over [0, max(g)], right-open except the last which is closed.
// Values below zero are counted in the first bin; a grid whose maximum is
// not positive puts everything in the last bin.
Histogram value_histogram(const Grid& g, std::size_t bins = kDefaultHistogramBins);

}  // namespace fairlens
