#include <atomic>
#include <cstdlib>
#include <string>

#include "topiclear/kernels.hpp"

namespace topiclear::kernels {

#if defined(TOPICLEAR_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(TOPICLEAR_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(TOPICLEAR_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(TOPICLEAR_HAVE_NEON)
    // Advanced SIMD is mandatory on AArch64.
    return &neon_table_unchecked();
#else
    return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (const auto* t = avx2_table()) out.push_back(t);
    if (const auto* t = neon_table()) out.push_back(t);
    return out;
}

namespace {

const KernelTable* select_default() {
    const char* env = std::getenv("TOPICLEAR_SIMD");
    const std::string want = env ? env : "";
    if (want == "scalar") return &scalar_table();
    if (want == "avx2") return avx2_table() ? avx2_table() : &scalar_table();
    if (want == "neon") return neon_table() ? neon_table() : &scalar_table();
    if (const auto* t = avx2_table()) return t;
    if (const auto* t = neon_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{select_default()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void set_active(const KernelTable& table) { current().store(&table, std::memory_order_relaxed); }

}  // namespace topiclear::kernels
