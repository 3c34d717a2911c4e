#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace topiclear::metrics {

// Integer labelling of N items into clusters [0, k).
struct Partition {
    std::vector<int> labels;
    int k = 0;

    Partition() = default;
    // k defaults to one past the largest label.
    explicit Partition(std::vector<int> labels, int k = -1);

    std::size_t size() const { return labels.size(); }
};

// Dense k_u x k_v count table.
struct Contingency {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> cells;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t n = 0;

    std::int64_t at(int i, int j) const { return cells[static_cast<std::size_t>(i) * cols + j]; }
};

Contingency contingency(const Partition& u, const Partition& v);

struct RandIndexComponents {
    std::int64_t a = 0;       // pairs together in both
    std::int64_t b = 0;       // pairs apart in both
    std::int64_t n_pair = 0;  // N (N - 1) / 2
};

RandIndexComponents rand_index_components(const Partition& u, const Partition& v);
double rand_index(const Partition& u, const Partition& v);

// True when the partitions agree up to a relabelling.
bool same_partition(const Partition& u, const Partition& v);

// Adjusted Rand index. 1 for identical partitions; when the chance
// adjustment denominator vanishes, 1 if identical and 0 otherwise.
double ari(const Partition& u, const Partition& v);

// Natural-log entropy of the cluster sizes.
double entropy(const Partition& u);
double mutual_information(const Partition& u, const Partition& v);
// Exact E[MI] under the hypergeometric (fixed marginals) model.
double expected_mutual_information(const Partition& u, const Partition& v);

// Adjusted mutual information with arithmetic-mean normalization.
double ami(const Partition& u, const Partition& v);

}  // namespace topiclear::metrics
