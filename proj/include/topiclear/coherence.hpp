#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topiclear/text.hpp"

namespace topiclear::metrics {

struct ScoredWord {
    std::string word;
    double score = 0.0;
};

// Ranked word lists per topic, score descending with lexicographic ties.
struct TopicWords {
    std::vector<std::vector<ScoredWord>> topics;
    std::size_t n_top = 10;
    std::vector<std::string> diagnostics;

    std::vector<std::string> words(std::size_t topic) const;
};

// Boolean sliding-window document frequencies. Each document contributes
// max(1, L - window + 1) windows of `window` consecutive tokens (a document
// shorter than the window is one window; empty documents contribute none).
class CooccurrenceStats {
public:
    std::size_t window_size() const { return window_; }
    std::size_t n_windows() const { return n_windows_; }
    std::size_t vocab_size() const { return words_.size(); }
    bool contains(std::string_view w) const { return index_.contains(std::string(w)); }

    // Window counts; throw Error for words outside the vocabulary.
    std::uint64_t word_count(std::string_view w) const;
    std::uint64_t pair_count(std::string_view w1, std::string_view w2) const;

    double p_word(std::string_view w) const;
    double p_pair(std::string_view w1, std::string_view w2) const;

private:
    friend CooccurrenceStats build_cooccurrence(const TokenizedCorpus&, std::size_t,
                                                const std::unordered_set<std::string>*);
    int id(std::string_view w) const;

    std::size_t window_ = 0;
    std::size_t n_windows_ = 0;
    std::vector<std::string> words_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::uint64_t> word_windows_;
    std::unordered_map<std::uint64_t, std::uint64_t> pair_windows_;
};

// `restrict_to`, when given, limits the tracked vocabulary (windows are still
// counted over the full token stream).
CooccurrenceStats build_cooccurrence(const TokenizedCorpus& corpus, std::size_t window_size,
                                     const std::unordered_set<std::string>* restrict_to = nullptr);
CooccurrenceStats build_cooccurrence(const Corpus& corpus, std::size_t window_size);

inline constexpr double kDefaultJointEps = 1e-12;

// Pairs that never share a window use eps as their joint probability.
double pmi(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2, double eps = kDefaultJointEps);
// In [-1, 1]; a pair present in every window scores 1.
double npmi(const CooccurrenceStats& stats, std::string_view w1, std::string_view w2, double eps = kDefaultJointEps);

struct CoherenceScore {
    double value = 0.0;             // mean over topics
    std::vector<double> per_topic;  // mean over word pairs
    std::size_t zero_norm_pairs = 0;  // C_v only
    std::vector<std::string> diagnostics;
};

// Mean pairwise PMI / NPMI over each topic's words, averaged over topics.
// Words missing from the vocabulary are skipped; a topic left with fewer
// than 2 words is an error.
CoherenceScore coherence_uci(const TopicWords& topics, const CooccurrenceStats& stats);
CoherenceScore coherence_npmi(const TopicWords& topics, const CooccurrenceStats& stats);
// Mean cosine similarity between NPMI context vectors (over the topic's own
// words) of every word pair. A zero context vector gives similarity 0.
CoherenceScore coherence_cv(const TopicWords& topics, const CooccurrenceStats& stats);

}  // namespace topiclear::metrics
