#include "topiclear/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "topiclear/error.hpp"
#include "topiclear/rng.hpp"

namespace topiclear {
namespace {

std::size_t count_changes(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i] ? 1 : 0;
    return changed;
}

RoundOutput cluster(const EmbeddingMatrix& features, const PipelineConfig& cfg, int round) {
    RoundOutput out;
    auto gmm = gmm_fit(features, cfg.k, round_seed(cfg.seed, round), cfg.gmm);
    std::vector<int> order;
    out.assignment = canonicalize(gmm_posteriors(gmm, features), &order);
    out.gmm = permute_components(gmm, order);
    return out;
}

ClusterStep describe(const RoundOutput& r, int round) {
    ClusterStep s;
    s.iteration = round;
    s.log_likelihood = r.gmm.log_likelihood();
    s.log_likelihood_trace = r.gmm.log_likelihood_trace;
    s.gmm_iterations = r.gmm.n_iter;
    s.gmm_converged = r.gmm.converged;
    s.gmm_seed = r.gmm.seed;
    s.lda_objective = r.lda.objective;
    return s;
}

}  // namespace

void PipelineConfig::validate() const {
    if (k < 2) throw Error("K must be at least 2, got " + std::to_string(k));
    if (d < static_cast<std::size_t>(k)) {
        throw Error("D = " + std::to_string(d) + " must be at least K = " + std::to_string(k));
    }
    if (max_adr_iter < 1) throw Error("max_adr_iter must be at least 1");
    if (lda_reg && !(*lda_reg >= 0)) throw Error("lda_reg must be >= 0");
}

std::vector<int> canonical_order(std::span<const int> h, int k) {
    std::vector<std::size_t> size(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> first(static_cast<std::size_t>(k), h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto c = static_cast<std::size_t>(h[i]);
        ++size[c];
        first[c] = std::min(first[c], i);
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        if (size[ua] != size[ub]) return size[ua] > size[ub];
        return first[ua] < first[ub];
    });
    return order;
}

TopicAssignment canonicalize(const TopicAssignment& a, std::vector<int>* order_out) {
    const auto order = canonical_order(a.h, a.k);
    std::vector<int> new_of_old(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) new_of_old[static_cast<std::size_t>(order[j])] = static_cast<int>(j);
    TopicAssignment out;
    out.k = a.k;
    out.h.reserve(a.h.size());
    for (int t : a.h) out.h.push_back(new_of_old[static_cast<std::size_t>(t)]);
    if (a.gamma) {
        RowMatrix g(a.gamma->rows(), a.gamma->cols());
        for (std::size_t j = 0; j < order.size(); ++j) {
            g.col(static_cast<Eigen::Index>(j)) = a.gamma->col(order[j]);
        }
        out.gamma = std::move(g);
    }
    if (order_out != nullptr) *order_out = order;
    return out;
}

std::uint64_t round_seed(std::uint64_t seed, int round) { return derive_seed(seed, static_cast<std::uint64_t>(round)); }

RoundOutput adr_round(const EmbeddingMatrix& y_d, const TopicAssignment& current, const PipelineConfig& cfg, int round) {
    auto lda = lda_fit(y_d, current, cfg.lda_reg);
    const auto features = lda_transform(lda, y_d);
    auto out = cluster(features, cfg, round);
    out.lda = std::move(lda);
    return out;
}

PipelineResult extract_topics(const EmbeddingMatrix& x_raw, const PipelineConfig& cfg) {
    cfg.validate();
    if (x_raw.stage() != Stage::raw) {
        throw Error(std::string("extract_topics expects raw embeddings, got stage ") + stage_name(x_raw.stage()));
    }
    if (x_raw.n_docs() < static_cast<std::size_t>(cfg.k)) {
        throw Error("extract_topics: " + std::to_string(x_raw.n_docs()) + " documents for K = " + std::to_string(cfg.k));
    }
    if (x_raw.dim() < cfg.d) {
        throw Error("extract_topics: embedding dim " + std::to_string(x_raw.dim()) + " is below D = " +
                    std::to_string(cfg.d));
    }

    PipelineResult result;
    result.pca = pca_fit(x_raw, cfg.d);
    const auto y_d = l2_normalize(pca_transform(result.pca, x_raw));
    result.seed_pca = pca_fit(y_d, static_cast<std::size_t>(cfg.k - 1));
    const auto seed_features = pca_transform(result.seed_pca, y_d, Stage::feature_k1);

    auto state = cluster(seed_features, cfg, 0);
    result.initial = describe(state, 0);
    result.initial.changed_count = 0;

    for (int round = 1; round <= cfg.max_adr_iter; ++round) {
        auto populated = std::vector<bool>(static_cast<std::size_t>(cfg.k), false);
        for (int t : state.assignment.h) populated[static_cast<std::size_t>(t)] = true;
        if (std::count(populated.begin(), populated.end(), true) < 2) {
            throw Error("extract_topics: round " + std::to_string(round) +
                        " starts with fewer than 2 populated topics; cannot fit the discriminant projection");
        }
        auto next = adr_round(y_d, state.assignment, cfg, round);
        auto step = describe(next, round);
        step.changed_count = count_changes(state.assignment.h, next.assignment.h);
        result.history.push_back(std::move(step));
        result.iterations = round;
        const bool same = next.assignment.h == state.assignment.h;
        state = std::move(next);
        if (same) {
            result.converged = true;
            break;
        }
    }

    result.assignment = std::move(state.assignment);
    result.lda = std::move(state.lda);
    result.gmm = std::move(state.gmm);
    return result;
}

}  // namespace topiclear
