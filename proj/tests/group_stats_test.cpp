#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fairlens/error.hpp"
#include "fairlens/group_stats.hpp"
#include "test_util.hpp"

namespace fairlens {
namespace {

using testing::random_grid;

ActivationMap map_of(Grid g, Ethnicity e = Ethnicity::kUnknown) {
  return ActivationMap{"m", std::move(g), {e, Gender::kUnknown}};
}

Cohort pixel_cohort(std::initializer_list<double> values) {
  Cohort c{"x", {}};
  for (double v : values) c.maps.push_back(map_of(Grid(1, 1, v)));
  return c;
}

Cohort random_cohort(Rng& rng, std::size_t n, std::size_t w, std::size_t h) {
  Cohort c{"r", {}};
  for (std::size_t k = 0; k < n; ++k) c.maps.push_back(map_of(random_grid(rng, w, h)));
  return c;
}

// Neumaier-compensated sum in long double.
long double compensated_sum(const std::vector<double>& xs) {
  long double s = 0, comp = 0;
  for (double x : xs) {
    const long double t = s + x;
    comp += std::abs(s) >= std::abs(static_cast<long double>(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + comp;
}

TEST(GroupStats, MeanOfTwo) {
  EXPECT_EQ(compute_mam(pixel_cohort({0.2, 0.6}))(0, 0), 0.4);
}

TEST(GroupStats, IdenticalMapsGiveThatMap) {
  Rng rng(1);
  const Grid g = random_grid(rng, 16, 16);
  Cohort c{"x", {map_of(g), map_of(g), map_of(g), map_of(g), map_of(g), map_of(g), map_of(g)}};
  EXPECT_EQ(compute_mam(c), g);
  EXPECT_EQ(compute_amv(c, compute_mam(c)), Grid(16, 16, 0.0));
}

TEST(GroupStats, MeanMatchesCompensatedOracle) {
  Rng rng(2);
  const Cohort c = random_cohort(rng, 50, 32, 32);
  const Grid mam = compute_mam(c);
  for (std::size_t p = 0; p < mam.size(); ++p) {
    std::vector<double> xs;
    for (const auto& m : c.maps) xs.push_back(m.grid.values()[p]);
    const double want = static_cast<double>(compensated_sum(xs) / xs.size());
    EXPECT_LT(std::abs(mam.values()[p] - want), 1e-12);
  }
}

TEST(GroupStats, MeanIsPermutationInsensitive) {
  Rng rng(3);
  Cohort c = random_cohort(rng, 200, 8, 8);
  const Grid before = compute_mam(c);
  for (int k = 0; k < 10; ++k) {
    for (std::size_t i = c.maps.size() - 1; i > 0; --i) std::swap(c.maps[i], c.maps[rng.below(i + 1)]);
    const Grid after = compute_mam(c);
    for (std::size_t p = 0; p < before.size(); ++p) {
      EXPECT_LT(std::abs(before.values()[p] - after.values()[p]), 1e-12);
    }
  }
}

TEST(GroupStats, AmvHandCases) {
  const Cohort two = pixel_cohort({0.2, 0.6});
  const double amv = compute_amv(two, compute_mam(two))(0, 0);
  // The stored inputs are 0.4 apart minus one ulp, so the exact result is
  // 0.19999999999999998, one ulp below 0.2.
  EXPECT_NEAR(amv, 0.2, std::nextafter(0.2, 1.0) - 0.2);
  EXPECT_EQ(amv, (0.6 - 0.2) / 2);
  const Cohort extreme = pixel_cohort({0.0, 1.0});
  EXPECT_EQ(compute_amv(extreme, compute_mam(extreme))(0, 0), 0.5);
  const Cohort same = pixel_cohort({0.3, 0.3, 0.3});
  EXPECT_EQ(compute_amv(same, compute_mam(same))(0, 0), 0.0);
}

TEST(GroupStats, AmvMatchesDirectFormula) {
  Rng rng(4);
  const Cohort c = random_cohort(rng, 25, 12, 12);
  const Grid amv = compute_amv(c, compute_mam(c));
  for (std::size_t p = 0; p < amv.size(); ++p) {
    std::vector<double> xs;
    for (const auto& m : c.maps) xs.push_back(m.grid.values()[p]);
    const long double mean = compensated_sum(xs) / xs.size();
    long double acc = 0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    EXPECT_NEAR(amv.values()[p], static_cast<double>(std::sqrt(acc / xs.size())), 1e-12);
  }
}

TEST(GroupStats, AmvZeroExactlyWhereMapsAgree) {
  Rng rng(5);
  Cohort c = random_cohort(rng, 6, 10, 10);
  for (auto& m : c.maps) {
    for (std::size_t x = 0; x < 10; ++x) m.grid(3, x) = 0.1 * static_cast<double>(x);
  }
  const Grid amv = compute_amv(c, compute_mam(c));
  for (std::size_t y = 0; y < 10; ++y)
    for (std::size_t x = 0; x < 10; ++x) {
      if (y == 3) {
        EXPECT_EQ(amv(y, x), 0.0);
      } else {
        EXPECT_GT(amv(y, x), 0.0);
      }
    }
}

TEST(GroupStats, BoundsHoldForUnitMaps) {
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    Cohort c = random_cohort(rng, 2 + rng.below(10), 6, 6);
    for (auto& m : c.maps)
      for (double& v : m.grid.values()) v = rng.below(3) == 0 ? std::round(v) : v;
    const auto s = compute_statistics(c);
    EXPECT_GE(min_value(s.mam), 0.0);
    EXPECT_LE(max_value(s.mam), 1.0);
    EXPECT_GE(min_value(s.amv), 0.0);
    EXPECT_LE(max_value(s.amv), 0.5);
    EXPECT_EQ(s.count, c.size());
  }
}

TEST(GroupStats, CohortValidation) {
  try {
    compute_mam(pixel_cohort({0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCohortTooSmall);
  }
  Cohort mixed{"x", {map_of(Grid(2, 2, 0.1)), map_of(Grid(3, 2, 0.1))}};
  EXPECT_THROW(compute_mam(mixed), Error);
  Cohort wrong{"C", {map_of(Grid(1, 1, 0.1), Ethnicity::kCaucasian),
                     map_of(Grid(1, 1, 0.1), Ethnicity::kAfrican)}};
  EXPECT_THROW(validate_cohort(wrong), Error);
  wrong.maps[1].demographics.ethnicity = Ethnicity::kCaucasian;
  EXPECT_NO_THROW(validate_cohort(wrong));
}

TEST(GroupStats, DamvHandCaseAndSymmetries) {
  const CohortStatistics a{"a", 2, Grid(2, 1, 0.0), Grid::from_rows({{0.3, 0.1}})};
  const CohortStatistics b{"b", 2, Grid(2, 1, 0.0), Grid::from_rows({{0.1, 0.3}})};
  const Grid d = compute_damv(a, b);
  EXPECT_DOUBLE_EQ(d(0, 0), 0.2);
  EXPECT_EQ(d(0, 0), d(0, 1));
  EXPECT_EQ(compute_damv(a, a), Grid(2, 1, 0.0));

  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const CohortStatistics x{"x", 2, Grid(9, 7, 0.0), random_grid(rng, 9, 7, 0, 0.5)};
    const CohortStatistics y{"y", 2, Grid(9, 7, 0.0), random_grid(rng, 9, 7, 0, 0.5)};
    const Grid xy = compute_damv(x, y);
    EXPECT_EQ(xy, compute_damv(y, x));
    EXPECT_EQ(flip_horizontal(xy), xy);
  }
  const CohortStatistics small{"s", 2, Grid(2, 2, 0.0), Grid(2, 2, 0.0)};
  EXPECT_THROW(compute_damv(a, small), Error);
}

TEST(GroupStats, Profiles) {
  const auto p = compute_spatial_profile(Grid::from_rows({{1, 2}, {3, 4}}), "C");
  EXPECT_EQ(p.label, "C");
  EXPECT_EQ(p.s_x, (std::vector<double>{4, 6}));
  EXPECT_EQ(p.s_y, (std::vector<double>{3, 7}));
  const auto z = compute_spatial_profile(Grid(5, 5, 0.0), "z");
  EXPECT_EQ(z.s_x, std::vector<double>(5, 0.0));
  EXPECT_EQ(z.s_y, std::vector<double>(5, 0.0));
}

TEST(GroupStats, ProfilesConserveMass) {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const Grid g = random_grid(rng, kFaceSize, kFaceSize, 0, 0.5);
    const auto p = compute_spatial_profile(g, "r");
    double sx = 0, sy = 0;
    for (double v : p.s_x) sx += v;
    for (double v : p.s_y) sy += v;
    const double t = total(g);
    EXPECT_LE(std::abs(sx - t), 1e-9 * t);
    EXPECT_LE(std::abs(sy - t), 1e-9 * t);
    EXPECT_GE(*std::min_element(p.s_x.begin(), p.s_x.end()), 0.0);
  }
}

TEST(GroupStats, Histogram) {
  const Histogram c = value_histogram(Grid(3, 3, 0.4), 4);
  EXPECT_EQ(c.counts, (std::vector<std::size_t>{0, 0, 0, 9}));
  EXPECT_EQ(c.edges.size(), 5u);
  EXPECT_EQ(c.edges.front(), 0.0);
  EXPECT_EQ(c.edges.back(), 0.4);

  const Histogram h = value_histogram(Grid::from_rows({{0, 1}}), 2);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(h.edges, (std::vector<double>{0, 0.5, 1}));

  const Histogram zero = value_histogram(Grid(2, 2, 0.0), 3);
  EXPECT_EQ(zero.counts, (std::vector<std::size_t>{0, 0, 4}));

  const Histogram neg = value_histogram(Grid::from_rows({{-0.5, 0.5, 1.0}}), 2);
  EXPECT_EQ(neg.counts, (std::vector<std::size_t>{1, 2}));

  EXPECT_THROW(value_histogram(Grid(1, 1, 0.0), 0), Error);
}

TEST(GroupStats, HistogramConservesMass) {
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const Histogram h = value_histogram(random_grid(rng, kFaceSize, kFaceSize), 1 + rng.below(100));
    std::size_t sum = 0;
    for (auto n : h.counts) sum += n;
    EXPECT_EQ(sum, kFaceSize * kFaceSize);
  }
  const Histogram d = value_histogram(random_grid(rng, kFaceSize, kFaceSize));
  EXPECT_EQ(d.counts.size(), kDefaultHistogramBins);
}

}  // namespace
}  // namespace fairlens
