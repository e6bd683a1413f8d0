#include <immintrin.h>

#include <cmath>

#include "kernels_internal.hpp"

namespace fairlens::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_andnot_pd(sign, d));
  }
  for (; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void divide(const double* x, double divisor, double* out, std::size_t n) {
  const __m256d vd = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(x + i), vd));
  }
  for (; i < n; ++i) out[i] = x[i] / divisor;
}

void relu(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void accumulate_range(const double* x, double* sum, double* lo, double* hi,
                      std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(sum + i, _mm256_add_pd(_mm256_loadu_pd(sum + i), v));
    _mm256_storeu_pd(lo + i, _mm256_min_pd(v, _mm256_loadu_pd(lo + i)));
    _mm256_storeu_pd(hi + i, _mm256_max_pd(v, _mm256_loadu_pd(hi + i)));
  }
  for (; i < n; ++i) {
    sum[i] = sum[i] + x[i];
    lo[i] = x[i] < lo[i] ? x[i] : lo[i];
    hi[i] = x[i] > hi[i] ? x[i] : hi[i];
  }
}

void accumulate_sq_dev(const double* x, const double* mean, double* acc,
                       std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(d, d)));
  }
  for (; i < n; ++i) {
    const double d = x[i] - mean[i];
    acc[i] = acc[i] + d * d;
  }
}

// Left half is vectorised against a lane-reversed load from the right end;
// the right half is its mirror image, so symmetry stays exact.
void mirror_average_row(const double* row, double* out, std::size_t w) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t j = 0;
  for (; j + kLanes <= w / 2; j += kLanes) {
    const __m256d left = _mm256_loadu_pd(row + j);
    const __m256d right = _mm256_permute4x64_pd(
        _mm256_loadu_pd(row + (w - j - kLanes)), _MM_SHUFFLE(0, 1, 2, 3));
    const __m256d avg = _mm256_mul_pd(_mm256_add_pd(left, right), half);
    _mm256_storeu_pd(out + j, avg);
    _mm256_storeu_pd(out + (w - j - kLanes),
                     _mm256_permute4x64_pd(avg, _MM_SHUFFLE(0, 1, 2, 3)));
  }
  for (; j < w - j; ++j) {
    out[j] = (row[j] + row[w - 1 - j]) * 0.5;
    out[w - 1 - j] = (row[w - 1 - j] + row[j]) * 0.5;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + kLanes),
                                             _mm256_loadu_pd(b + i + kLanes)));
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

constexpr KernelTable kAvx2Table{
    Backend::kAvx2, "avx2",    add,  abs_diff,         axpy,
    divide,         relu,      accumulate_range, accumulate_sq_dev,
    mirror_average_row, dot,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() { return kAvx2Table; }
}  // namespace detail

}  // namespace fairlens::kernels
