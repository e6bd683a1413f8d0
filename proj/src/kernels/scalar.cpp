#include <cmath>

#include "fairlens/kernels.hpp"
#include "kernels_internal.hpp"

namespace fairlens::kernels {
namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void divide(const double* x, double divisor, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] / divisor;
}

void relu(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

// Comparison order mirrors _mm256_min_pd(x, lo) / _mm256_max_pd(x, hi).
void accumulate_range(const double* x, double* sum, double* lo, double* hi,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = sum[i] + x[i];
    lo[i] = x[i] < lo[i] ? x[i] : lo[i];
    hi[i] = x[i] > hi[i] ? x[i] : hi[i];
  }
}

void accumulate_sq_dev(const double* x, const double* mean, double* acc,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean[i];
    acc[i] = acc[i] + d * d;
  }
}

void mirror_average_row(const double* row, double* out, std::size_t w) {
  for (std::size_t j = 0; j < w; ++j) out[j] = (row[j] + row[w - 1 - j]) * 0.5;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

constexpr KernelTable kScalarTable{
    Backend::kScalar, "scalar",  add,  abs_diff,           axpy,
    divide,           relu,      accumulate_range, accumulate_sq_dev,
    mirror_average_row, dot,
};

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

}  // namespace fairlens::kernels
