#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topiclear/partition_metrics.hpp"
#include "topiclear/text.hpp"

namespace topiclear::metrics {

// Uniform label noise: with probability p_n each label is replaced by a
// uniform draw over all k labels (possibly its current value).
Partition apply_label_noise(const Partition& u, double p_n, int k, std::uint64_t seed);

// Fraction of positions with equal labels (no relabelling).
double label_agreement(const Partition& u, const Partition& v);

// 1 - (K - 1) / K * p_n
double expected_noise_agreement(double p_n, int k);

// Ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

// Pearson correlation of average ranks. Throws for constant input.
double spearman_rho(std::span<const double> xs, std::span<const double> ys);

struct NoiseStudyOptions {
    std::vector<double> p_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    int replicates = 40;
    std::uint64_t seed = 0;
    bool coherence = true;
    std::size_t n_top = 10;
    std::size_t uci_window = 10;
    std::size_t cv_window = 110;
};

struct NoiseStudyRow {
    double p_n = 0.0;
    int replicate = 0;
    double ari = 0.0;
    double ami = 0.0;
    double c_uci = 0.0;
    double c_npmi = 0.0;
    double c_v = 0.0;
    double agreement = 0.0;
};

struct NoiseStudyResult {
    std::vector<NoiseStudyRow> rows;
    // Spearman rho between p_n and each measure over all (p_n, replicate)
    // rows; unset when undefined (constant column).
    std::optional<double> rho_ari;
    std::optional<double> rho_ami;
    std::optional<double> rho_c_uci;
    std::optional<double> rho_c_npmi;
    std::optional<double> rho_c_v;
    // Mean empirical agreement with the clean labels per grid value.
    std::vector<double> mean_agreement;
    std::vector<std::string> diagnostics;
};

// Replicate seed for grid point i, replicate r: derive_seed(derive_seed(seed, i), r).
// Coherence is computed when options.coherence is set and `corpus` is given,
// with top words recomputed from each noised labelling.
NoiseStudyResult run_noise_study(const Partition& gold, const TokenizedCorpus* corpus, const NoiseStudyOptions& options);

}  // namespace topiclear::metrics
