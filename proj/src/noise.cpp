#include "topiclear/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topiclear/coherence.hpp"
#include "topiclear/error.hpp"
#include "topiclear/rng.hpp"
#include "topiclear/topic_words.hpp"

namespace topiclear::metrics {

Partition apply_label_noise(const Partition& u, double p_n, int k, std::uint64_t seed) {
    if (!(p_n >= 0.0 && p_n <= 1.0)) throw Error("noise level p_n must lie in [0, 1]");
    if (k < 1) throw Error("label count k must be positive");
    if (u.k > k) throw Error("partition uses labels beyond k = " + std::to_string(k));
    Rng rng(seed);
    std::vector<int> out = u.labels;
    for (int& label : out) {
        if (rng.uniform() < p_n) label = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    }
    return Partition(std::move(out), k);
}

double label_agreement(const Partition& u, const Partition& v) {
    if (u.size() != v.size() || u.size() == 0) throw Error("label_agreement needs equal non-empty lengths");
    std::size_t same = 0;
    for (std::size_t i = 0; i < u.size(); ++i) same += u.labels[i] == v.labels[i] ? 1 : 0;
    return static_cast<double>(same) / static_cast<double>(u.size());
}

double expected_noise_agreement(double p_n, int k) {
    return 1.0 - static_cast<double>(k - 1) / static_cast<double>(k) * p_n;
}

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error("spearman_rho: length mismatch");
    if (xs.size() < 2) throw Error("spearman_rho needs at least 2 observations");
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    const double n = static_cast<double>(rx.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw Error("spearman_rho is undefined for a constant input");
    return sxy / std::sqrt(sxx * syy);
}

NoiseStudyResult run_noise_study(const Partition& gold, const TokenizedCorpus* corpus, const NoiseStudyOptions& options) {
    if (options.replicates < 1) throw Error("noise study needs at least one replicate");
    if (options.p_grid.empty()) throw Error("noise study needs a non-empty p_n grid");
    if (gold.size() < 2) throw Error("noise study needs at least 2 labelled documents");
    const bool with_coherence = options.coherence && corpus != nullptr;
    if (with_coherence && corpus->size() != gold.size()) {
        throw Error("noise study: corpus has " + std::to_string(corpus->size()) + " documents, labels cover " +
                    std::to_string(gold.size()));
    }

    std::optional<CooccurrenceStats> uci_stats, cv_stats;
    if (with_coherence) {
        uci_stats = build_cooccurrence(*corpus, options.uci_window);
        cv_stats = build_cooccurrence(*corpus, options.cv_window);
    }

    NoiseStudyResult result;
    for (std::size_t gi = 0; gi < options.p_grid.size(); ++gi) {
        const double p = options.p_grid[gi];
        double agreement_sum = 0.0;
        for (int r = 0; r < options.replicates; ++r) {
            const auto seed = derive_seed(derive_seed(options.seed, gi), static_cast<std::uint64_t>(r));
            const auto noisy = apply_label_noise(gold, p, gold.k, seed);
            NoiseStudyRow row;
            row.p_n = p;
            row.replicate = r;
            row.ari = ari(gold, noisy);
            row.ami = ami(gold, noisy);
            row.agreement = label_agreement(gold, noisy);
            agreement_sum += row.agreement;
            if (with_coherence) {
                auto words = top_words(*corpus, noisy.labels, noisy.k, options.n_top);
                std::erase_if(words.topics, [](const auto& list) { return list.empty(); });
                row.c_uci = coherence_uci(words, *uci_stats).value;
                row.c_npmi = coherence_npmi(words, *uci_stats).value;
                row.c_v = coherence_cv(words, *cv_stats).value;
            }
            result.rows.push_back(row);
        }
        result.mean_agreement.push_back(agreement_sum / options.replicates);
    }

    std::vector<double> ps, col;
    for (const auto& r : result.rows) ps.push_back(r.p_n);
    auto rho_of = [&](double NoiseStudyRow::*field) -> std::optional<double> {
        col.clear();
        for (const auto& r : result.rows) col.push_back(r.*field);
        try {
            return spearman_rho(ps, col);
        } catch (const Error& e) {
            result.diagnostics.push_back(e.what());
            return std::nullopt;
        }
    };
    result.rho_ari = rho_of(&NoiseStudyRow::ari);
    result.rho_ami = rho_of(&NoiseStudyRow::ami);
    if (with_coherence) {
        result.rho_c_uci = rho_of(&NoiseStudyRow::c_uci);
        result.rho_c_npmi = rho_of(&NoiseStudyRow::c_npmi);
        result.rho_c_v = rho_of(&NoiseStudyRow::c_v);
    }
    return result;
}

}  // namespace topiclear::metrics
