#pragma once

#include <cstdint>
#include <vector>

#include "topiclear/types.hpp"

namespace topiclear {

struct KMeansResult {
    RowMatrix centers;  // k x d
    std::vector<int> labels;
    double inertia = 0.0;
    int iterations = 0;
};

// Greedy k-means++ seeding (2 + floor(ln k) candidates per step, keep the one
// that most reduces the potential). Returns row indices of the chosen seeds.
std::vector<std::size_t> kmeans_plus_plus(const RowMatrix& x, int k, std::uint64_t seed);

// k-means++ seeding followed by at most `lloyd_iterations` Lloyd updates.
// A cluster that empties is moved onto the point farthest from its center.
KMeansResult kmeans_fit(const RowMatrix& x, int k, std::uint64_t seed, int lloyd_iterations = 10);

}  // namespace topiclear
