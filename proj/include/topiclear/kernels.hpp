#pragma once

// Data-parallel inner loops used by the numerical modules.
//
// Every kernel has a scalar reference implementation plus optional SIMD
// variants (AVX2+FMA on x86-64, NEON on AArch64). The variant is picked once
// at startup from the CPU features; TOPICLEAR_SIMD=scalar|avx2|neon forces a
// specific table (falling back to scalar if unavailable). SIMD variants
// reassociate sums, so results match the scalar path only to rounding; runs
// on one machine with one table are bit-reproducible.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace topiclear::kernels {

struct KernelTable {
    std::string_view name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // out = a - b
    void (*subtract)(const double* a, const double* b, double* out, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

const KernelTable& active();
// Tests and benchmarks only; not thread-safe with concurrent kernel calls.
void set_active(const KernelTable& table);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}
inline double squared_norm(std::span<const double> a) {
    return active().dot(a.data(), a.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void subtract(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    active().subtract(a.data(), b.data(), out.data(), a.size());
}

}  // namespace topiclear::kernels
