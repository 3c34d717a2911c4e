#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "test_util.hpp"
#include "topiclear/embeddings_io.hpp"

namespace testing {

// Gaussian blobs written as a labelled corpus plus raw embeddings. Each
// document draws its words mostly from a vocabulary slice owned by its blob.
struct BlobFixture {
    std::filesystem::path corpus;
    std::filesystem::path embeddings;
    Blobs blobs;
};

inline BlobFixture write_blob_fixture(const std::filesystem::path& dir, std::size_t n, std::size_t dim, int k,
                                      double spacing, std::uint64_t seed, bool labelled = true) {
    BlobFixture f;
    f.blobs = make_blobs(n, dim, k, spacing, 1.0, seed);
    topiclear::Rng rng(seed ^ 0x5eedULL);
    topiclear::Corpus corpus;
    for (int c = 0; c < k; ++c) corpus.label_names.push_back("label" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        topiclear::Document d;
        d.doc_id = "doc" + std::to_string(i);
        const int c = f.blobs.labels[i];
        for (int w = 0; w < 15; ++w) {
            const bool own = rng.uniform() < 0.8;
            const auto topic = own ? static_cast<std::uint64_t>(c) : rng.below(static_cast<std::uint64_t>(k));
            d.text += "t" + std::to_string(topic) + "w" + std::to_string(rng.below(6)) + " ";
        }
        if (labelled) d.gold_label = c;
        corpus.docs.push_back(std::move(d));
    }
    if (!labelled) corpus.label_names.clear();
    f.corpus = dir / "corpus.jsonl";
    f.embeddings = dir / "embeddings.bin";
    topiclear::write_corpus(corpus, f.corpus);
    topiclear::write_embeddings(topiclear::EmbeddingMatrix(f.blobs.points, topiclear::Stage::raw), f.embeddings);
    return f;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
