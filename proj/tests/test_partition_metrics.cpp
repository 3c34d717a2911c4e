#include <algorithm>
#include <cmath>
#include <map>

#include "test_util.hpp"
#include "topiclear/partition_metrics.hpp"

using namespace topiclear;
using metrics::Partition;

namespace {

// ARI straight from pairwise counts, no contingency table.
double brute_ari(const std::vector<int>& u, const std::vector<int>& v) {
    const std::size_t n = u.size();
    double both = 0, in_u = 0, in_v = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool su = u[i] == u[j], sv = v[i] == v[j];
            both += su && sv;
            in_u += su;
            in_v += sv;
            pairs += 1;
        }
    }
    const double expected = in_u * in_v / pairs;
    const double max_index = 0.5 * (in_u + in_v);
    if (max_index == expected) return u == v ? 1.0 : 0.0;
    return (both - expected) / (max_index - expected);
}

double plugin_mi(const std::vector<int>& u, const std::vector<int>& v) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> pu, pv;
    const double n = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        joint[{u[i], v[i]}] += 1 / n;
        pu[u[i]] += 1 / n;
        pv[v[i]] += 1 / n;
    }
    double mi = 0;
    for (const auto& [key, p] : joint) mi += p * std::log(p / (pu[key.first] * pv[key.second]));
    return mi;
}

std::vector<int> random_labels(std::size_t n, int k, Rng& rng) {
    std::vector<int> out(n);
    for (auto& x : out) x = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    return out;
}

}  // namespace

TEST_CASE("pair counts on a four-item example") {
    const auto c = metrics::rand_index_components(Partition({0, 0, 1, 1}), Partition({0, 1, 0, 1}));
    CHECK(c.a == 0);
    CHECK(c.b == 2);
    CHECK(c.n_pair == 6);
    CHECK(metrics::rand_index(Partition({0, 0, 1, 1}), Partition({0, 1, 0, 1})) == doctest::Approx(2.0 / 6.0));
    CHECK_THROWS_CONTAINING(metrics::rand_index_components(Partition({0}), Partition({0})), "fewer than 2 items");
}

TEST_CASE("ari matches brute-force pair counting") {
    const std::vector<int> u{0, 0, 1, 1, 2, 2}, v{0, 0, 1, 2, 1, 2};
    CHECK(metrics::ari(Partition(u), Partition(v)) == doctest::Approx(brute_ari(u, v)).epsilon(1e-12));
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.below(40);
        const auto a = random_labels(n, 1 + static_cast<int>(rng.below(5)), rng);
        const auto b = random_labels(n, 1 + static_cast<int>(rng.below(5)), rng);
        CHECK(std::abs(metrics::ari(Partition(a), Partition(b)) - brute_ari(a, b)) < 1e-12);
    }
}

TEST_CASE("ari limits") {
    CHECK(metrics::ari(Partition({0, 0, 1, 1, 2}), Partition({2, 2, 0, 0, 1})) == 1.0);
    CHECK(metrics::ari(Partition({0, 0, 0}), Partition({0, 0, 0})) == 1.0);
    CHECK(metrics::ari(Partition({0, 1, 2}), Partition({0, 0, 0})) == 0.0);
    Rng rng(2);
    double sum = 0;
    for (int t = 0; t < 200; ++t) {
        sum += metrics::ari(Partition(random_labels(300, 5, rng)), Partition(random_labels(300, 5, rng)));
    }
    CHECK(std::abs(sum / 200) < 0.01);
}

TEST_CASE("mutual information agrees with the plug-in estimate") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_labels(60, 4, rng), b = random_labels(60, 3, rng);
        CHECK(std::abs(metrics::mutual_information(Partition(a), Partition(b)) - plugin_mi(a, b)) < 1e-12);
    }
    CHECK(metrics::entropy(Partition({0, 0, 1, 1})) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("expected mutual information matches Monte Carlo permutation") {
    const std::vector<int> u{0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2};
    std::vector<int> v{0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 3, 3};
    const double exact = metrics::expected_mutual_information(Partition(u), Partition(v));
    Rng rng(4);
    double sum = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = v.size() - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
        sum += plugin_mi(u, v);
    }
    CHECK(std::abs(sum / trials - exact) < 0.005);
}

TEST_CASE("ami properties") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const auto a = random_labels(50, 4, rng), b = random_labels(50, 5, rng);
        const double ab = metrics::ami(Partition(a), Partition(b));
        CHECK(ab == doctest::Approx(metrics::ami(Partition(b), Partition(a))).epsilon(1e-12));
        auto relabeled = a;
        for (int& x : relabeled) x = 3 - x;
        CHECK(ab == doctest::Approx(metrics::ami(Partition(relabeled), Partition(b))).epsilon(1e-12));
        CHECK(ab <= 1.0 + 1e-12);
    }
    CHECK(metrics::ami(Partition({0, 0, 1, 1}), Partition({1, 1, 0, 0})) == 1.0);
    CHECK(metrics::ami(Partition({0, 1, 2, 3}), Partition({0, 0, 0, 0})) == 0.0);
}

TEST_CASE("contingency table and relabeling") {
    const auto c = metrics::contingency(Partition({0, 0, 1, 2}, 4), Partition({1, 0, 1, 1}));
    CHECK(c.rows == 4);
    CHECK(c.cols == 2);
    CHECK(c.at(0, 0) == 1);
    CHECK(c.at(0, 1) == 1);
    CHECK(c.at(2, 1) == 1);
    CHECK(c.row_sums[3] == 0);
    CHECK(c.n == 4);
    CHECK(metrics::same_partition(Partition({0, 0, 1}), Partition({5, 5, 2})));
    CHECK_FALSE(metrics::same_partition(Partition({0, 0, 1}), Partition({0, 1, 1})));
    CHECK_THROWS(metrics::contingency(Partition({0, 1}), Partition({0, 1, 2})));
}
