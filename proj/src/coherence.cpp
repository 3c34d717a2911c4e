#include "topiclear/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "topiclear/error.hpp"

namespace topiclear::metrics {
namespace {

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Words of a topic that the statistics know about; throws if fewer than 2.
std::vector<std::string> usable_words(const TopicWords& topics, std::size_t t, const CooccurrenceStats& stats,
                                      std::vector<std::string>& diagnostics) {
    std::vector<std::string> out;
    for (const auto& sw : topics.topics[t]) {
        if (stats.contains(sw.word)) {
            out.push_back(sw.word);
        } else {
            diagnostics.push_back("topic " + std::to_string(t) + ": word '" + sw.word + "' not in vocabulary");
        }
    }
    if (out.size() < 2) {
        throw Error("topic " + std::to_string(t) + " has " + std::to_string(out.size()) +
                    " in-vocabulary words; coherence needs at least 2");
    }
    return out;
}

template <typename PairScore>
CoherenceScore mean_pairwise(const TopicWords& topics, const CooccurrenceStats& stats, PairScore score) {
    if (topics.topics.empty()) throw Error("coherence needs at least one topic");
    CoherenceScore out;
    for (std::size_t t = 0; t < topics.topics.size(); ++t) {
        const auto words = usable_words(topics, t, stats, out.diagnostics);
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < words.size(); ++i) {
            for (std::size_t j = i + 1; j < words.size(); ++j) {
                sum += score(words[i], words[j]);
                ++pairs;
            }
        }
        out.per_topic.push_back(sum / static_cast<double>(pairs));
    }
    double total = 0.0;
    for (double v : out.per_topic) total += v;
    out.value = total / static_cast<double>(out.per_topic.size());
    return out;
}

}  // namespace

std::vector<std::string> TopicWords::words(std::size_t topic) const {
    std::vector<std::string> out;
    for (const auto& sw : topics.at(topic)) out.push_back(sw.word);
    return out;
}

int CooccurrenceStats::id(std::string_view w) const {
    auto it = index_.find(std::string(w));
    if (it == index_.end()) throw Error("unknown word '" + std::string(w) + "'");
    return it->second;
}

std::uint64_t CooccurrenceStats::word_count(std::string_view w) const {
    return word_windows_[static_cast<std::size_t>(id(w))];
}

std::uint64_t CooccurrenceStats::pair_count(std::string_view w1, std::string_view w2) const {
    const int a = id(w1), b = id(w2);
    if (a == b) return word_windows_[static_cast<std::size_t>(a)];
    auto it = pair_windows_.find(pair_key(a, b));
    return it == pair_windows_.end() ? 0 : it->second;
}

double CooccurrenceStats::p_word(std::string_view w) const {
    return static_cast<double>(word_count(w)) / static_cast<double>(n_windows_);
}

double CooccurrenceStats::p_pair(std::string_view w1, std::string_view w2) const {
    return static_cast<double>(pair_count(w1, w2)) / static_cast<double>(n_windows_);
}

CooccurrenceStats build_cooccurrence(const TokenizedCorpus& corpus, std::size_t window_size,
                                     const std::unordered_set<std::string>* restrict_to) {
    if (window_size < 1) throw Error("window size must be at least 1");
    CooccurrenceStats s;
    s.window_ = window_size;

    // corpus id -> stats id, -1 when not tracked
    std::vector<int> remap(corpus.vocab.size(), -1);
    for (std::size_t i = 0; i < corpus.vocab.size(); ++i) {
        if (restrict_to != nullptr && !restrict_to->contains(corpus.vocab[i])) continue;
        remap[i] = static_cast<int>(s.words_.size());
        s.index_.emplace(corpus.vocab[i], remap[i]);
        s.words_.push_back(corpus.vocab[i]);
    }
    s.word_windows_.assign(s.words_.size(), 0);

    std::vector<int> window;
    for (const auto& doc : corpus.docs) {
        if (doc.empty()) continue;
        const std::size_t len = doc.size();
        const std::size_t count = len <= window_size ? 1 : len - window_size + 1;
        const std::size_t width = std::min(len, window_size);
        for (std::size_t start = 0; start < count; ++start) {
            ++s.n_windows_;
            window.clear();
            for (std::size_t i = start; i < start + width; ++i) {
                const int id = remap[static_cast<std::size_t>(doc[i])];
                if (id >= 0) window.push_back(id);
            }
            std::sort(window.begin(), window.end());
            window.erase(std::unique(window.begin(), window.end()), window.end());
            for (std::size_t i = 0; i < window.size(); ++i) {
                ++s.word_windows_[static_cast<std::size_t>(window[i])];
                for (std::size_t j = i + 1; j < window.size(); ++j) ++s.pair_windows_[pair_key(window[i], window[j])];
            }
        }
    }
    if (s.n_windows_ == 0) throw Error("corpus is empty after tokenization");
    return s;
}

CooccurrenceStats build_cooccurrence(const Corpus& corpus, std::size_t window_size) {
    return build_cooccurrence(TokenizedCorpus::from_corpus(corpus), window_size);
}

double pmi(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2, double eps) {
    const double p1 = stats.p_word(w1);
    const double p2 = stats.p_word(w2);
    const double joint = stats.pair_count(w1, w2) > 0 ? stats.p_pair(w1, w2) : eps;
    return std::log(joint / (p1 * p2));
}

double npmi(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2, double eps) {
    const double joint = stats.pair_count(w1, w2) > 0 ? stats.p_pair(w1, w2) : eps;
    if (joint >= 1.0) return 1.0;
    const double v = -pmi(stats, w1, w2, eps) / std::log(joint);
    return std::clamp(v, -1.0, 1.0);
}

CoherenceScore coherence_uci(const TopicWords& topics, const CooccurrenceStats& stats) {
    return mean_pairwise(topics, stats, [&](const std::string& a, const std::string& b) { return pmi(stats, a, b); });
}

CoherenceScore coherence_npmi(const TopicWords& topics, const CooccurrenceStats& stats) {
    return mean_pairwise(topics, stats, [&](const std::string& a, const std::string& b) { return npmi(stats, a, b); });
}

CoherenceScore coherence_cv(const TopicWords& topics, const CooccurrenceStats& stats) {
    if (topics.topics.empty()) throw Error("coherence needs at least one topic");
    CoherenceScore out;
    for (std::size_t t = 0; t < topics.topics.size(); ++t) {
        const auto words = usable_words(topics, t, stats, out.diagnostics);
        const std::size_t n = words.size();
        std::vector<double> ctx(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) ctx[i * n + j] = npmi(stats, words[i], words[j]);
        }
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dot = 0.0, ni = 0.0, nj = 0.0;
                for (std::size_t m = 0; m < n; ++m) {
                    dot += ctx[i * n + m] * ctx[j * n + m];
                    ni += ctx[i * n + m] * ctx[i * n + m];
                    nj += ctx[j * n + m] * ctx[j * n + m];
                }
                ++pairs;
                if (ni == 0.0 || nj == 0.0) {
                    ++out.zero_norm_pairs;
                    out.diagnostics.push_back("topic " + std::to_string(t) + ": zero context vector for pair ('" +
                                              words[i] + "', '" + words[j] + "')");
                    continue;
                }
                sum += std::clamp(dot / std::sqrt(ni * nj), -1.0, 1.0);
            }
        }
        out.per_topic.push_back(sum / static_cast<double>(pairs));
    }
    double total = 0.0;
    for (double v : out.per_topic) total += v;
    out.value = total / static_cast<double>(out.per_topic.size());
    return out;
}

}  // namespace topiclear::metrics
