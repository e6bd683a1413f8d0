#pragma once

// Data-parallel inner loops shared by grid, CNN and cohort code.
//
// Every kernel has a scalar reference implementation and optional SIMD
// variants chosen once at startup from the CPU feature set. Elementwise
// kernels are bit-identical across backends: lanes perform the same IEEE
// operations in the same order as the scalar loop, and nothing is
// contracted into FMA. `dot` is the one reduction; its SIMD variant
// reassociates and is only equivalent within rounding.

#include <cstddef>
#include <string_view>
#include <vector>

namespace fairlens::kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  std::string_view name;

  // out[i] = a[i] + b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = |a[i] - b[i]|
  void (*abs_diff)(const double* a, const double* b, double* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = x[i] / divisor
  void (*divide)(const double* x, double divisor, double* out, std::size_t n);
  // x[i] = x[i] > 0 ? x[i] : 0
  void (*relu)(double* x, std::size_t n);
  // sum[i] += x[i]; lo[i] = min(x[i], lo[i]); hi[i] = max(x[i], hi[i])
  void (*accumulate_range)(const double* x, double* sum, double* lo, double* hi,
                           std::size_t n);
  // acc[i] += (x[i] - mean[i])^2
  void (*accumulate_sq_dev)(const double* x, const double* mean, double* acc,
                            std::size_t n);
  // out[j] = (row[j] + row[w-1-j]) / 2
  void (*mirror_average_row)(const double* row, double* out, std::size_t w);
  // sum a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table();

std::vector<const KernelTable*> available_tables();

// Active table. Initialised on first use from the best available backend,
// unless FAIRLENS_KERNELS=scalar|avx2 says otherwise.
const KernelTable& active();

// Returns false (and changes nothing) when the backend is unavailable.
bool select(Backend backend);

}  // namespace fairlens::kernels
