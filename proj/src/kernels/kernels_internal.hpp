#pragma once

#include "fairlens/kernels.hpp"

namespace fairlens::kernels::detail {

#if defined(FAIRLENS_HAVE_AVX2)
// Defined in avx2.cpp, which is the only translation unit built with -mavx2.
// Must not be called unless the CPU reports AVX2.
const KernelTable& avx2_table_unchecked();
#endif

}  // namespace fairlens::kernels::detail
