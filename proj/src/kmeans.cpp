#include "topiclear/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "topiclear/error.hpp"
#include "topiclear/kernels.hpp"
#include "topiclear/parallel.hpp"
#include "topiclear/rng.hpp"

namespace topiclear {
namespace {

std::span<const double> row_of(const RowMatrix& m, std::size_t i) {
    return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

// Nearest center per row (lowest index on ties); returns squared distances.
std::vector<double> assign(const RowMatrix& x, const RowMatrix& centers, std::vector<int>& labels) {
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<double> dist(n);
    labels.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (Eigen::Index c = 0; c < centers.rows(); ++c) {
                const double d = kernels::squared_distance(row_of(x, i), row_of(centers, static_cast<std::size_t>(c)));
                if (d < best) {
                    best = d;
                    arg = static_cast<int>(c);
                }
            }
            labels[i] = arg;
            dist[i] = best;
        }
    });
    return dist;
}

}  // namespace

std::vector<std::size_t> kmeans_plus_plus(const RowMatrix& x, int k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw Error("kmeans_plus_plus: k = " + std::to_string(k) + " with " + std::to_string(n) + " points");
    }
    Rng rng(seed);
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    std::vector<std::size_t> chosen{static_cast<std::size_t>(rng.below(n))};

    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) closest[i] = kernels::squared_distance(row_of(x, i), row_of(x, chosen[0]));

    std::vector<double> cumulative(n);
    std::vector<double> candidate_dist(n);
    std::vector<double> best_dist(n);
    for (int c = 1; c < k; ++c) {
        std::partial_sum(closest.begin(), closest.end(), cumulative.begin());
        const double potential = cumulative.back();
        double best_potential = std::numeric_limits<double>::infinity();
        std::size_t best_id = 0;
        for (int t = 0; t < trials; ++t) {
            const double target = rng.uniform() * potential;
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
            const auto id = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1);
            double pot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                candidate_dist[i] = std::min(closest[i], kernels::squared_distance(row_of(x, i), row_of(x, id)));
                pot += candidate_dist[i];
            }
            if (pot < best_potential) {
                best_potential = pot;
                best_id = id;
                best_dist.swap(candidate_dist);
            }
        }
        chosen.push_back(best_id);
        closest = best_dist;
    }
    return chosen;
}

KMeansResult kmeans_fit(const RowMatrix& x, int k, std::uint64_t seed, int lloyd_iterations) {
    const auto seeds = kmeans_plus_plus(x, k, seed);
    const auto n = static_cast<std::size_t>(x.rows());
    const auto dim = static_cast<std::size_t>(x.cols());

    KMeansResult r;
    r.centers.resize(k, x.cols());
    for (int c = 0; c < k; ++c) r.centers.row(c) = x.row(static_cast<Eigen::Index>(seeds[static_cast<std::size_t>(c)]));

    std::vector<double> dist = assign(x, r.centers, r.labels);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k));
    for (int it = 0; it < lloyd_iterations; ++it) {
        r.iterations = it + 1;
        r.centers.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(r.labels[i]);
            ++counts[c];
            kernels::axpy(1.0, row_of(x, i), {r.centers.data() + c * dim, dim});
        }
        for (int c = 0; c < k; ++c) {
            const auto cu = static_cast<std::size_t>(c);
            if (counts[cu] > 0) {
                r.centers.row(c) /= static_cast<double>(counts[cu]);
                continue;
            }
            const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
            r.centers.row(c) = x.row(static_cast<Eigen::Index>(far));
            dist[far] = 0.0;
        }
        const auto previous = r.labels;
        dist = assign(x, r.centers, r.labels);
        if (r.labels == previous) break;
    }
    r.inertia = std::accumulate(dist.begin(), dist.end(), 0.0);
    return r;
}

}  // namespace topiclear
