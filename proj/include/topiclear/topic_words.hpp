#pragma once

#include <span>
#include <vector>

#include "topiclear/coherence.hpp"
#include "topiclear/partition_metrics.hpp"
#include "topiclear/text.hpp"
#include "topiclear/types.hpp"

namespace topiclear::metrics {

// Per topic, tokens ranked by raw frequency inside the topic's documents
// (ties lexicographic). An empty topic yields an empty list and a
// diagnostic. `n = 0` keeps every word.
TopicWords top_words(const TokenizedCorpus& corpus, std::span<const int> h, int k, std::size_t n);

inline constexpr double kDeltaTfidfSmoothing = 0.5;

// One-vs-rest delta TF-IDF:
//   score(w) = tf_topic(w) * log( N_rest (df_topic(w) + s) / (N_topic (df_rest(w) + s)) )
// over words that occur in the topic; top n returned (n = 0 keeps all).
std::vector<ScoredWord> delta_tfidf(const TokenizedCorpus& corpus, std::span<const int> h, int k, int topic,
                                    std::size_t n, double smoothing = kDeltaTfidfSmoothing);

struct TopicMatch {
    int a = 0;
    int b = 0;
    double similarity = 0.0;
};

// Cosine similarity of two score vectors keyed by word.
double topic_cosine(const std::vector<ScoredWord>& a, const std::vector<ScoredWord>& b);

// Repeatedly takes the globally most similar unmatched pair (ties: lowest a,
// then lowest b) until one side runs out. Topics are compared as
// word->score vectors, so TopicWords built with n = 0 compare full
// term-frequency vectors.
std::vector<TopicMatch> greedy_match(const TopicWords& a, const TopicWords& b);
// Matching of two assignments of the same corpus via full term-frequency vectors.
std::vector<TopicMatch> greedy_match(const TokenizedCorpus& corpus, const TopicAssignment& a, const TopicAssignment& b);

struct CompositionMatrix {
    RowMatrix fractions;  // K x L, rows sum to 1 for populated topics
    std::vector<std::size_t> topic_sizes;
    std::vector<std::string> diagnostics;
};

CompositionMatrix composition_matrix(std::span<const int> h, int k, const Partition& gold);

}  // namespace topiclear::metrics
