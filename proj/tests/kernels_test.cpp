#include <gtest/gtest.h>

#include <cstring>

#include "fairlens/kernels.hpp"
#include "fairlens/synthetic.hpp"

namespace fairlens {
namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-3, 3);
  return v;
}

// Compares each available backend against the scalar reference over
// lengths that exercise every tail case.
class KernelEquivalence : public ::testing::Test {
 protected:
  template <typename Fn>
  void for_each_backend(Fn&& fn) {
    for (const kernels::KernelTable* t : kernels::available_tables()) {
      SCOPED_TRACE(std::string(t->name));
      for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 111, 112, 1000}) {
        SCOPED_TRACE(n);
        fn(*t, n);
      }
    }
  }
  const kernels::KernelTable& ref = kernels::scalar_table();
  Rng rng{42};
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(Kernels, ScalarAlwaysAvailable) {
  const kernels::Backend before = kernels::active().backend;
  const auto tables = kernels::available_tables();
  ASSERT_FALSE(tables.empty());
  EXPECT_EQ(tables.front()->backend, kernels::Backend::kScalar);
  EXPECT_TRUE(kernels::select(kernels::Backend::kScalar));
  EXPECT_EQ(kernels::active().backend, kernels::Backend::kScalar);
  if (kernels::avx2_table() != nullptr) {
    EXPECT_TRUE(kernels::select(kernels::Backend::kAvx2));
    EXPECT_EQ(kernels::active().backend, kernels::Backend::kAvx2);
  } else {
    EXPECT_FALSE(kernels::select(kernels::Backend::kAvx2));
  }
  kernels::select(before);
}

TEST_F(KernelEquivalence, BinaryOps) {
  for_each_backend([&](const kernels::KernelTable& t, std::size_t n) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    std::vector<double> r1(n), r2(n);
    ref.add(a.data(), b.data(), r1.data(), n);
    t.add(a.data(), b.data(), r2.data(), n);
    EXPECT_TRUE(bit_equal(r1, r2));
    ref.abs_diff(a.data(), b.data(), r1.data(), n);
    t.abs_diff(a.data(), b.data(), r2.data(), n);
    EXPECT_TRUE(bit_equal(r1, r2));
    ref.divide(a.data(), 3.7, r1.data(), n);
    t.divide(a.data(), 3.7, r2.data(), n);
    EXPECT_TRUE(bit_equal(r1, r2));
  });
}

TEST_F(KernelEquivalence, InPlaceOps) {
  for_each_backend([&](const kernels::KernelTable& t, std::size_t n) {
    const auto x = random_vec(rng, n);
    auto y1 = random_vec(rng, n);
    auto y2 = y1;
    ref.axpy(-0.61, x.data(), y1.data(), n);
    t.axpy(-0.61, x.data(), y2.data(), n);
    EXPECT_TRUE(bit_equal(y1, y2));
    auto z1 = x;
    auto z2 = x;
    ref.relu(z1.data(), n);
    t.relu(z2.data(), n);
    EXPECT_TRUE(bit_equal(z1, z2));
  });
}

TEST_F(KernelEquivalence, Accumulators) {
  for_each_backend([&](const kernels::KernelTable& t, std::size_t n) {
    std::vector<double> s1(n, 0.0), lo1(n, 1e300), hi1(n, -1e300);
    auto s2 = s1, lo2 = lo1, hi2 = hi1;
    std::vector<double> q1(n, 0.0), q2(n, 0.0);
    const auto mean = random_vec(rng, n);
    for (int k = 0; k < 5; ++k) {
      const auto x = random_vec(rng, n);
      ref.accumulate_range(x.data(), s1.data(), lo1.data(), hi1.data(), n);
      t.accumulate_range(x.data(), s2.data(), lo2.data(), hi2.data(), n);
      ref.accumulate_sq_dev(x.data(), mean.data(), q1.data(), n);
      t.accumulate_sq_dev(x.data(), mean.data(), q2.data(), n);
    }
    EXPECT_TRUE(bit_equal(s1, s2));
    EXPECT_TRUE(bit_equal(lo1, lo2));
    EXPECT_TRUE(bit_equal(hi1, hi2));
    EXPECT_TRUE(bit_equal(q1, q2));
  });
}

TEST_F(KernelEquivalence, MirrorAverageRow) {
  for_each_backend([&](const kernels::KernelTable& t, std::size_t n) {
    const auto row = random_vec(rng, n);
    std::vector<double> r1(n), r2(n);
    ref.mirror_average_row(row.data(), r1.data(), n);
    t.mirror_average_row(row.data(), r2.data(), n);
    EXPECT_TRUE(bit_equal(r1, r2));
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(r2[j], r2[n - 1 - j]);
  });
}

TEST_F(KernelEquivalence, DotWithinRounding) {
  for_each_backend([&](const kernels::KernelTable& t, std::size_t n) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) bound += std::abs(a[i] * b[i]);
    EXPECT_NEAR(ref.dot(a.data(), b.data(), n), t.dot(a.data(), b.data(), n),
                4.0 * n * 1.1102230246251565e-16 * bound + 1e-300);
  });
}

}  // namespace
}  // namespace fairlens
