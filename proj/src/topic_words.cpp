#include "topiclear/topic_words.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "topiclear/error.hpp"

namespace topiclear::metrics {
namespace {

void check_assignment(const TokenizedCorpus& corpus, std::span<const int> h, int k) {
    if (h.size() != corpus.size()) {
        throw Error("assignment has " + std::to_string(h.size()) + " documents, corpus has " +
                    std::to_string(corpus.size()));
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0 || h[i] >= k) throw Error("topic " + std::to_string(h[i]) + " outside [0, " + std::to_string(k) + ")");
    }
}

void rank(std::vector<ScoredWord>& words, std::size_t n) {
    std::sort(words.begin(), words.end(), [](const ScoredWord& x, const ScoredWord& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.word < y.word;
    });
    if (n > 0 && words.size() > n) words.resize(n);
}

}  // namespace

TopicWords top_words(const TokenizedCorpus& corpus, std::span<const int> h, int k, std::size_t n) {
    check_assignment(corpus, h, k);
    TopicWords out;
    out.n_top = n;
    std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(k),
                                                   std::vector<std::uint64_t>(corpus.vocab.size(), 0));
    std::vector<std::size_t> docs(static_cast<std::size_t>(k), 0);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        auto& c = counts[static_cast<std::size_t>(h[d])];
        ++docs[static_cast<std::size_t>(h[d])];
        for (int id : corpus.docs[d]) ++c[static_cast<std::size_t>(id)];
    }
    out.topics.resize(static_cast<std::size_t>(k));
    for (std::size_t t = 0; t < counts.size(); ++t) {
        if (docs[t] == 0) {
            out.diagnostics.push_back("topic " + std::to_string(t) + " is empty");
            continue;
        }
        auto& list = out.topics[t];
        for (std::size_t id = 0; id < counts[t].size(); ++id) {
            if (counts[t][id] > 0) list.push_back({corpus.vocab[id], static_cast<double>(counts[t][id])});
        }
        rank(list, n);
    }
    return out;
}

std::vector<ScoredWord> delta_tfidf(const TokenizedCorpus& corpus, std::span<const int> h, int k, int topic,
                                    std::size_t n, double smoothing) {
    check_assignment(corpus, h, k);
    if (topic < 0 || topic >= k) throw Error("topic " + std::to_string(topic) + " outside [0, " + std::to_string(k) + ")");
    const std::size_t v = corpus.vocab.size();
    std::vector<std::uint64_t> tf(v, 0), df_topic(v, 0), df_rest(v, 0);
    std::size_t n_topic = 0;
    std::vector<int> seen(v, -1);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const bool inside = h[d] == topic;
        n_topic += inside ? 1 : 0;
        for (int id : corpus.docs[d]) {
            const auto u = static_cast<std::size_t>(id);
            if (inside) ++tf[u];
            if (seen[u] != static_cast<int>(d)) {
                seen[u] = static_cast<int>(d);
                ++(inside ? df_topic : df_rest)[u];
            }
        }
    }
    const std::size_t n_rest = corpus.size() - n_topic;
    if (n_topic == 0) throw Error("delta_tfidf: topic " + std::to_string(topic) + " is empty");
    if (n_rest == 0) throw Error("delta_tfidf: every document is in topic " + std::to_string(topic) + "; no contrast set");
    std::vector<ScoredWord> out;
    for (std::size_t id = 0; id < v; ++id) {
        if (tf[id] == 0) continue;
        const double ratio = (static_cast<double>(n_rest) * (static_cast<double>(df_topic[id]) + smoothing)) /
                             (static_cast<double>(n_topic) * (static_cast<double>(df_rest[id]) + smoothing));
        out.push_back({corpus.vocab[id], static_cast<double>(tf[id]) * std::log(ratio)});
    }
    rank(out, n);
    return out;
}

double topic_cosine(const std::vector<ScoredWord>& a, const std::vector<ScoredWord>& b) {
    std::map<std::string_view, double> lookup;
    double na = 0.0, nb = 0.0, dot = 0.0;
    for (const auto& w : a) {
        lookup[w.word] += w.score;
        na += w.score * w.score;
    }
    for (const auto& w : b) {
        nb += w.score * w.score;
        auto it = lookup.find(w.word);
        if (it != lookup.end()) dot += it->second * w.score;
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

std::vector<TopicMatch> greedy_match(const TopicWords& a, const TopicWords& b) {
    if (a.topics.empty() || b.topics.empty()) throw Error("greedy_match needs topics on both sides");
    std::vector<TopicMatch> candidates;
    for (std::size_t i = 0; i < a.topics.size(); ++i) {
        for (std::size_t j = 0; j < b.topics.size(); ++j) {
            candidates.push_back({static_cast<int>(i), static_cast<int>(j), topic_cosine(a.topics[i], b.topics[j])});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const TopicMatch& x, const TopicMatch& y) {
        return std::tie(y.similarity, x.a, x.b) < std::tie(x.similarity, y.a, y.b);
    });
    std::vector<bool> used_a(a.topics.size(), false), used_b(b.topics.size(), false);
    std::vector<TopicMatch> out;
    const std::size_t limit = std::min(a.topics.size(), b.topics.size());
    for (const auto& c : candidates) {
        if (used_a[static_cast<std::size_t>(c.a)] || used_b[static_cast<std::size_t>(c.b)]) continue;
        used_a[static_cast<std::size_t>(c.a)] = true;
        used_b[static_cast<std::size_t>(c.b)] = true;
        out.push_back(c);
        if (out.size() == limit) break;
    }
    return out;
}

std::vector<TopicMatch> greedy_match(const TokenizedCorpus& corpus, const TopicAssignment& a, const TopicAssignment& b) {
    return greedy_match(top_words(corpus, a.h, a.k, 0), top_words(corpus, b.h, b.k, 0));
}

CompositionMatrix composition_matrix(std::span<const int> h, int k, const Partition& gold) {
    if (h.size() != gold.size()) {
        throw Error("composition_matrix: " + std::to_string(h.size()) + " assignments vs " +
                    std::to_string(gold.size()) + " gold labels");
    }
    CompositionMatrix out;
    out.fractions = RowMatrix::Zero(k, gold.k);
    out.topic_sizes.assign(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0 || h[i] >= k) throw Error("topic " + std::to_string(h[i]) + " outside [0, " + std::to_string(k) + ")");
        out.fractions(h[i], gold.labels[i]) += 1.0;
        ++out.topic_sizes[static_cast<std::size_t>(h[i])];
    }
    for (int t = 0; t < k; ++t) {
        const auto size = out.topic_sizes[static_cast<std::size_t>(t)];
        if (size == 0) {
            out.diagnostics.push_back("topic " + std::to_string(t) + " is empty");
            continue;
        }
        out.fractions.row(t) /= static_cast<double>(size);
    }
    return out;
}

}  // namespace topiclear::metrics
