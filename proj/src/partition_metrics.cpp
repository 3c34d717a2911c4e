#include "topiclear/partition_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "topiclear/error.hpp"

namespace topiclear::metrics {
namespace {

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

void check_pair(const Partition& u, const Partition& v) {
    if (u.size() != v.size()) {
        throw Error("partition length mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
}

void check_pairs_defined(const Partition& u) {
    if (u.size() < 2) throw Error("fewer than 2 items; pair-based scores are undefined");
}

constexpr double kDegenerate = 1e-12;

}  // namespace

Partition::Partition(std::vector<int> l, int k_in) : labels(std::move(l)) {
    int top = -1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) throw Error("negative label at position " + std::to_string(i));
        top = std::max(top, labels[i]);
    }
    if (k_in < 0) {
        k = top + 1;
    } else {
        if (top >= k_in) throw Error("label " + std::to_string(top) + " outside [0, " + std::to_string(k_in) + ")");
        k = k_in;
    }
}

Contingency contingency(const Partition& u, const Partition& v) {
    check_pair(u, v);
    Contingency c;
    c.rows = u.k;
    c.cols = v.k;
    c.n = static_cast<std::int64_t>(u.size());
    c.cells.assign(static_cast<std::size_t>(c.rows) * static_cast<std::size_t>(c.cols), 0);
    c.row_sums.assign(static_cast<std::size_t>(c.rows), 0);
    c.col_sums.assign(static_cast<std::size_t>(c.cols), 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto r = static_cast<std::size_t>(u.labels[i]);
        const auto s = static_cast<std::size_t>(v.labels[i]);
        ++c.cells[r * static_cast<std::size_t>(c.cols) + s];
        ++c.row_sums[r];
        ++c.col_sums[s];
    }
    return c;
}

RandIndexComponents rand_index_components(const Partition& u, const Partition& v) {
    check_pair(u, v);
    check_pairs_defined(u);
    const auto c = contingency(u, v);
    RandIndexComponents r;
    r.n_pair = choose2(c.n);
    std::int64_t same_u = 0, same_v = 0;
    for (auto x : c.cells) r.a += choose2(x);
    for (auto x : c.row_sums) same_u += choose2(x);
    for (auto x : c.col_sums) same_v += choose2(x);
    r.b = r.n_pair - same_u - same_v + r.a;
    return r;
}

double rand_index(const Partition& u, const Partition& v) {
    const auto r = rand_index_components(u, v);
    return static_cast<double>(r.a + r.b) / static_cast<double>(r.n_pair);
}

bool same_partition(const Partition& u, const Partition& v) {
    check_pair(u, v);
    const auto c = contingency(u, v);
    // Identical up to relabelling iff every populated row and column of the
    // table has exactly one nonzero cell.
    std::vector<int> row_nz(static_cast<std::size_t>(c.rows), 0), col_nz(static_cast<std::size_t>(c.cols), 0);
    for (int i = 0; i < c.rows; ++i) {
        for (int j = 0; j < c.cols; ++j) {
            if (c.at(i, j) > 0) {
                ++row_nz[static_cast<std::size_t>(i)];
                ++col_nz[static_cast<std::size_t>(j)];
            }
        }
    }
    return std::all_of(row_nz.begin(), row_nz.end(), [](int x) { return x <= 1; }) &&
           std::all_of(col_nz.begin(), col_nz.end(), [](int x) { return x <= 1; });
}

double ari(const Partition& u, const Partition& v) {
    check_pair(u, v);
    check_pairs_defined(u);
    if (same_partition(u, v)) return 1.0;
    const auto c = contingency(u, v);
    double index = 0.0, sum_u = 0.0, sum_v = 0.0;
    for (auto x : c.cells) index += static_cast<double>(choose2(x));
    for (auto x : c.row_sums) sum_u += static_cast<double>(choose2(x));
    for (auto x : c.col_sums) sum_v += static_cast<double>(choose2(x));
    const double n_pair = static_cast<double>(choose2(c.n));
    const double expected = sum_u * sum_v / n_pair;
    const double max_index = 0.5 * (sum_u + sum_v);
    const double denom = max_index - expected;
    if (std::abs(denom) <= kDegenerate * std::max(1.0, n_pair)) return 0.0;
    return (index - expected) / denom;
}

double entropy(const Partition& u) {
    if (u.size() == 0) return 0.0;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(u.k), 0);
    for (int l : u.labels) ++counts[static_cast<std::size_t>(l)];
    const double n = static_cast<double>(u.size());
    double h = 0.0;
    for (auto x : counts) {
        if (x == 0) continue;
        const double p = static_cast<double>(x) / n;
        h -= p * std::log(p);
    }
    return h;
}

double mutual_information(const Partition& u, const Partition& v) {
    const auto c = contingency(u, v);
    const double n = static_cast<double>(c.n);
    double mi = 0.0;
    for (int i = 0; i < c.rows; ++i) {
        for (int j = 0; j < c.cols; ++j) {
            const auto nij = c.at(i, j);
            if (nij == 0) continue;
            const double x = static_cast<double>(nij);
            mi += x / n *
                  std::log(n * x / (static_cast<double>(c.row_sums[static_cast<std::size_t>(i)]) *
                                    static_cast<double>(c.col_sums[static_cast<std::size_t>(j)])));
        }
    }
    return std::max(mi, 0.0);
}

double expected_mutual_information(const Partition& u, const Partition& v) {
    const auto c = contingency(u, v);
    const std::int64_t n = c.n;
    const double nd = static_cast<double>(n);
    std::vector<double> log_fact(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 2; i <= n; ++i) {
        log_fact[static_cast<std::size_t>(i)] = log_fact[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
    }
    auto lf = [&](std::int64_t x) { return log_fact[static_cast<std::size_t>(x)]; };

    double emi = 0.0;
    for (auto a : c.row_sums) {
        if (a == 0) continue;
        for (auto b : c.col_sums) {
            if (b == 0) continue;
            const double fixed = lf(a) + lf(b) + lf(n - a) + lf(n - b) - lf(n);
            const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
            const std::int64_t hi = std::min(a, b);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double x = static_cast<double>(nij);
                const double term = x / nd * std::log(nd * x / (static_cast<double>(a) * static_cast<double>(b)));
                const double log_p = fixed - lf(nij) - lf(a - nij) - lf(b - nij) - lf(n - a - b + nij);
                emi += term * std::exp(log_p);
            }
        }
    }
    return emi;
}

double ami(const Partition& u, const Partition& v) {
    check_pair(u, v);
    check_pairs_defined(u);
    if (same_partition(u, v)) return 1.0;
    const double mi = mutual_information(u, v);
    const double emi = expected_mutual_information(u, v);
    const double mean_h = 0.5 * (entropy(u) + entropy(v));
    const double denom = mean_h - emi;
    if (std::abs(denom) <= kDegenerate) return 0.0;
    return (mi - emi) / denom;
}

}  // namespace topiclear::metrics
