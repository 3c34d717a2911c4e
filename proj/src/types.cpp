#include "topiclear/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "topiclear/error.hpp"

namespace topiclear {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::raw: return "raw";
        case Stage::pca_d: return "pca_d";
        case Stage::normalized: return "normalized";
        case Stage::feature_k1: return "feature_k1";
    }
    return "unknown";
}

EmbeddingMatrix::EmbeddingMatrix(RowMatrix data, Stage stage) : data_(std::move(data)), stage_(stage) {
    if (!data_.allFinite()) {
        throw Error("embedding matrix contains non-finite entries");
    }
}

int Corpus::label_count() const {
    if (!label_names.empty()) return static_cast<int>(label_names.size());
    int top = -1;
    for (const auto& d : docs) {
        if (d.gold_label) top = std::max(top, *d.gold_label);
    }
    return top + 1;
}

std::vector<int> Corpus::gold_labels() const {
    if (!has_gold_labels()) throw Error("corpus has no gold labels");
    std::vector<int> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(*d.gold_label);
    return out;
}

void Corpus::validate() const {
    std::unordered_set<std::string> seen;
    seen.reserve(docs.size());
    std::size_t labelled = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (!seen.insert(docs[i].doc_id).second) {
            throw Error("duplicate doc_id '" + docs[i].doc_id + "' at document " + std::to_string(i));
        }
        if (docs[i].gold_label) ++labelled;
    }
    if (labelled != 0 && labelled != docs.size()) {
        throw Error("partial gold labels: " + std::to_string(labelled) + " of " +
                    std::to_string(docs.size()) + " documents are labelled");
    }
    if (labelled == 0) return;
    const int limit = label_names.empty() ? INT32_MAX : static_cast<int>(label_names.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const int g = *docs[i].gold_label;
        if (g < 0 || g >= limit) {
            throw Error("gold_label " + std::to_string(g) + " of document " + std::to_string(i) +
                        " outside [0, " + std::to_string(limit) + ")");
        }
    }
}

TopicAssignment TopicAssignment::from_posteriors(RowMatrix gamma) {
    TopicAssignment a;
    a.k = static_cast<int>(gamma.cols());
    a.h.resize(static_cast<std::size_t>(gamma.rows()));
    for (Eigen::Index n = 0; n < gamma.rows(); ++n) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < gamma.cols(); ++j) {
            if (gamma(n, j) > gamma(n, best)) best = j;
        }
        a.h[static_cast<std::size_t>(n)] = static_cast<int>(best);
    }
    a.gamma = std::move(gamma);
    return a;
}

void TopicAssignment::validate(double row_sum_tol) const {
    if (k < 1) throw Error("topic count must be positive");
    for (std::size_t n = 0; n < h.size(); ++n) {
        if (h[n] < 0 || h[n] >= k) {
            throw Error("topic " + std::to_string(h[n]) + " of document " + std::to_string(n) +
                        " outside [0, " + std::to_string(k) + ")");
        }
    }
    if (!gamma) return;
    const auto& g = *gamma;
    if (static_cast<std::size_t>(g.rows()) != h.size() || g.cols() != k) {
        throw Error("posterior matrix shape does not match assignment");
    }
    for (Eigen::Index n = 0; n < g.rows(); ++n) {
        const double s = g.row(n).sum();
        if (!std::isfinite(s) || std::abs(s - 1.0) > row_sum_tol) {
            throw Error("posterior row " + std::to_string(n) + " sums to " + std::to_string(s));
        }
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < g.cols(); ++j) {
            if (g(n, j) > g(n, best)) best = j;
        }
        if (best != h[static_cast<std::size_t>(n)]) {
            throw Error("topic of document " + std::to_string(n) + " is not the maximum-posterior topic");
        }
    }
}

}  // namespace topiclear
