#pragma once

#include <string>
#include <vector>

namespace fairlens {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Re-derives core results with independent brute-force code paths: FMR/FNMR
// counting, threshold enumeration, direct convolution, the cohort statistic
// hand cases, reported BFW FDR recomputation and kernel-backend agreement.
std::vector<SelftestResult> run_selftest();

}  // namespace fairlens
