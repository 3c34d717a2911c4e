#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "topiclear/types.hpp"

namespace topiclear {

// Binary embedding file:
//   "TPCL" | u32 version | u64 n_docs | u32 dim | u8 stage | f32[n_docs * dim]
// All integers and floats little-endian, payload row-major.
inline constexpr char kEmbeddingMagic[4] = {'T', 'P', 'C', 'L'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderBytes = 21;

void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix read_embeddings(const std::filesystem::path& path);

// JSON-Lines corpus. Each line: {"doc_id": str, "text": str,
// "gold_label": int?, "label_name": str?}. `label_name`, when present,
// names the category of `gold_label`; names must be consistent across lines.
Corpus read_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// CSV with header `doc_index,topic[,p0,...,p{K-1}]`, LF line endings.
void write_assignment(const TopicAssignment& a, const std::filesystem::path& path);
// Without posterior columns K is taken from `expected_k` when given,
// otherwise from the largest topic value.
TopicAssignment read_assignment(const std::filesystem::path& path, std::optional<int> expected_k = std::nullopt);

}  // namespace topiclear
