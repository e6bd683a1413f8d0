#include "fairlens/group_stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairlens/error.hpp"
#include "fairlens/kernels.hpp"

namespace fairlens {
namespace {

bool carries_label(const ActivationMap& map, const std::string& label) {
  if (auto e = parse_ethnicity(label); e && *e != Ethnicity::kUnknown) {
    return map.demographics.ethnicity == *e;
  }
  if (auto g = parse_gender(label); g && *g != Gender::kUnknown) {
    return map.demographics.gender == *g;
  }
  return true;
}

struct Moments {
  Grid sum;
  Grid lo;
  Grid hi;
};

Moments accumulate(const Cohort& cohort) {
  const Grid& first = cohort.maps.front().grid;
  Moments m{Grid(first.width(), first.height()), first, first};
  const auto& k = kernels::active();
  for (const auto& map : cohort.maps) {
    k.accumulate_range(map.grid.values().data(), m.sum.values().data(), m.lo.values().data(),
                       m.hi.values().data(), m.sum.size());
  }
  return m;
}

}  // namespace

void validate_cohort(const Cohort& cohort) {
  if (cohort.maps.size() < kMinCohortSize) {
    throw Error(ErrorCode::kCohortTooSmall,
                "cohort '" + cohort.label + "' has " + std::to_string(cohort.maps.size()) +
                    " maps; at least " + std::to_string(kMinCohortSize) + " are required");
  }
  const Grid& first = cohort.maps.front().grid;
  for (std::size_t k = 0; k < cohort.maps.size(); ++k) {
    const ActivationMap& map = cohort.maps[k];
    if (!map.grid.same_shape(first) || map.grid.empty()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "cohort '" + cohort.label + "': map " + std::to_string(k) + " ('" +
                      map.sample_id + "') has a different size");
    }
    if (!carries_label(map, cohort.label)) {
      throw Error(ErrorCode::kInvalidArgument, "cohort '" + cohort.label + "': map '" +
                                                   map.sample_id + "' carries another group tag");
    }
  }
}

Grid compute_mam(const Cohort& cohort) {
  validate_cohort(cohort);
  Moments m = accumulate(cohort);
  Grid mam(m.sum.width(), m.sum.height());
  kernels::active().divide(m.sum.values().data(), static_cast<double>(cohort.size()),
                           mam.values().data(), mam.size());
  auto out = mam.values();
  const auto lo = m.lo.values();
  const auto hi = m.hi.values();
  for (std::size_t p = 0; p < out.size(); ++p) {
    // The mean of equal values is that value; rounding may not agree.
    out[p] = lo[p] == hi[p] ? lo[p] : std::clamp(out[p], lo[p], hi[p]);
  }
  return mam;
}

Grid compute_amv(const Cohort& cohort, const Grid& mam) {
  validate_cohort(cohort);
  const Grid& first = cohort.maps.front().grid;
  if (!mam.same_shape(first)) {
    throw Error(ErrorCode::kDimensionMismatch, "mean grid does not match cohort map size");
  }
  const auto& k = kernels::active();
  Grid acc(first.width(), first.height());
  for (const auto& map : cohort.maps) {
    k.accumulate_sq_dev(map.grid.values().data(), mam.values().data(), acc.values().data(),
                        acc.size());
  }
  Grid amv(first.width(), first.height());
  k.divide(acc.values().data(), static_cast<double>(cohort.size()), amv.values().data(),
           amv.size());

  // Population deviation never exceeds half the sample range.
  const Moments m = accumulate(cohort);
  auto out = amv.values();
  const auto lo = m.lo.values();
  const auto hi = m.hi.values();
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = std::min(std::sqrt(out[p]), (hi[p] - lo[p]) * 0.5);
  }
  return amv;
}

CohortStatistics compute_statistics(const Cohort& cohort) {
  CohortStatistics stats;
  stats.label = cohort.label;
  stats.count = cohort.size();
  stats.mam = compute_mam(cohort);
  stats.amv = compute_amv(cohort, stats.mam);
  return stats;
}

Grid compute_damv(const CohortStatistics& a, const CohortStatistics& b) {
  if (!a.amv.same_shape(b.amv)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "AM-V grids of '" + a.label + "' and '" + b.label + "' differ in size");
  }
  return mirror_average(abs_diff(a.amv, b.amv));
}

SpatialProfile compute_spatial_profile(const Grid& amv, std::string label) {
  return SpatialProfile{std::move(label), reduce_sum_cols(amv), reduce_sum_rows(amv)};
}

Histogram value_histogram(const Grid& g, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  h.edges.resize(bins + 1);
  const double top = g.empty() ? 0.0 : max_value(g);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = top * static_cast<double>(b) / static_cast<double>(bins);
  }
  h.edges[bins] = top;
  for (double v : g.values()) {
    std::size_t b = bins - 1;
    if (top > 0.0 && v < top) {
      const double pos = std::floor(v / top * static_cast<double>(bins));
      b = pos <= 0.0 ? 0 : std::min(static_cast<std::size_t>(pos), bins - 1);
    }
    ++h.counts[b];
  }
  return h;
}

}  // namespace fairlens
