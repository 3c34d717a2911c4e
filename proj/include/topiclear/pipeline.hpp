#pragma once

#include <cstdint>
#include <vector>

#include "topiclear/gmm.hpp"
#include "topiclear/reduction.hpp"
#include "topiclear/types.hpp"

namespace topiclear {

struct PipelineConfig {
    int k = 6;
    std::size_t d = 64;
    int max_adr_iter = 10;
    std::uint64_t seed = 0;
    GmmOptions gmm;
    // Ridge on S_W; unset means 1e-6 * trace(S_W) / D.
    std::optional<double> lda_reg;

    void validate() const;
};

// Diagnostics of one GMM clustering step.
struct ClusterStep {
    int iteration = 0;           // 0 for the PCA-seeded step
    std::size_t changed_count = 0;  // documents whose topic changed vs the previous step
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_trace;
    int gmm_iterations = 0;
    bool gmm_converged = false;
    std::uint64_t gmm_seed = 0;
    double lda_objective = 0.0;  // unset (0) for iteration 0
};

struct PipelineResult {
    TopicAssignment assignment;
    int iterations = 0;  // discriminant/recluster rounds executed
    bool converged = false;
    ClusterStep initial;
    std::vector<ClusterStep> history;
    PcaModel pca;
    PcaModel seed_pca;
    LdaModel lda;  // empty when max_adr_iter rounds never ran
    GmmModel gmm;
};

// Relabels topics by descending size (ties: smallest first document index).
// `order[new] = old`. Two labelings of the same partition map to the same
// vector, so equality of canonical labels is equality of partitions.
std::vector<int> canonical_order(std::span<const int> h, int k);
TopicAssignment canonicalize(const TopicAssignment& a, std::vector<int>* order_out = nullptr);

// Per-round GMM seed: derive_seed(cfg.seed, round).
std::uint64_t round_seed(std::uint64_t seed, int round);

// Full extraction: PCA to D, L2 normalization, PCA to K - 1, GMM; then
// alternate discriminant projection of the normalized features and a fresh
// GMM fit until the partition repeats or max_adr_iter rounds ran.
PipelineResult extract_topics(const EmbeddingMatrix& x_raw, const PipelineConfig& cfg);

// One discriminant + GMM round on the normalized features; exposed so
// callers can check the fixed point of a converged run.
struct RoundOutput {
    LdaModel lda;
    GmmModel gmm;
    TopicAssignment assignment;  // canonical labels
};
RoundOutput adr_round(const EmbeddingMatrix& y_d, const TopicAssignment& current, const PipelineConfig& cfg, int round);

}  // namespace topiclear
