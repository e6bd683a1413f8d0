#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fairlens/kernels.hpp"
#include "kernels_internal.hpp"

namespace fairlens::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FAIRLENS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  const char* env = std::getenv("FAIRLENS_KERNELS");
  const std::string_view requested = env != nullptr ? env : "";
  if (requested == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{best_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(FAIRLENS_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  if (supported) return &detail::avx2_table_unchecked();
#endif
  return nullptr;
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = avx2_table()) tables.push_back(t);
  return tables;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(Backend backend) {
  const KernelTable* table = nullptr;
  switch (backend) {
    case Backend::kScalar: table = &scalar_table(); break;
    case Backend::kAvx2: table = avx2_table(); break;
  }
  if (table == nullptr) return false;
  current().store(table, std::memory_order_release);
  return true;
}

}  // namespace fairlens::kernels
