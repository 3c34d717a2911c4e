#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "topiclear/kernels.hpp"

namespace kernels = topiclear::kernels;

namespace {

std::vector<double> draw(std::size_t n, topiclear::Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = testing::normal(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels compute the textbook formulas") {
    const std::vector<double> a{1, 2, 3}, b{4, -5, 6};
    const auto& s = kernels::scalar_table();
    CHECK(s.dot(a.data(), b.data(), 3) == 12.0);
    CHECK(s.squared_distance(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
    std::vector<double> y{1, 1, 1};
    s.axpy(2.0, a.data(), y.data(), 3);
    CHECK(y == std::vector<double>{3, 5, 7});
    std::vector<double> out(3);
    s.subtract(a.data(), b.data(), out.data(), 3);
    CHECK(out == std::vector<double>{-3, 7, -3});
    CHECK(s.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("every available SIMD table matches the scalar reference") {
    topiclear::Rng rng(7);
    const auto& ref = kernels::scalar_table();
    for (const auto* table : kernels::available_tables()) {
        CAPTURE(table->name);
        // Lengths cover empty input, partial vectors and several unrolled blocks.
        for (std::size_t n = 0; n <= 70; ++n) {
            const auto a = draw(n, rng), b = draw(n, rng);
            double scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]) + (a[i] - b[i]) * (a[i] - b[i]);
            const double tol = 1e-14 * scale;
            CHECK(std::abs(table->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);
            CHECK(std::abs(table->squared_distance(a.data(), b.data(), n) - ref.squared_distance(a.data(), b.data(), n)) <= tol);

            auto y1 = draw(n, rng);
            auto y2 = y1;
            table->axpy(-0.75, a.data(), y1.data(), n);
            ref.axpy(-0.75, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (1 + std::abs(y2[i])));

            std::vector<double> d1(n), d2(n);
            table->subtract(a.data(), b.data(), d1.data(), n);
            ref.subtract(a.data(), b.data(), d2.data(), n);
            CHECK(d1 == d2);
        }
    }
}

TEST_CASE("active table can be switched and restored") {
    const auto& original = kernels::active();
    kernels::set_active(kernels::scalar_table());
    CHECK(kernels::active().name == "scalar");
    const std::vector<double> a{3, 4};
    CHECK(kernels::squared_norm(a) == 25.0);
    kernels::set_active(original);
    CHECK(kernels::active().name == original.name);
}

TEST_CASE("AVX2 table is offered on x86-64 CPUs that support it") {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        REQUIRE(kernels::avx2_table() != nullptr);
        CHECK(kernels::avx2_table()->name == "avx2");
    }
#endif
    CHECK(kernels::available_tables().front()->name == "scalar");
}
