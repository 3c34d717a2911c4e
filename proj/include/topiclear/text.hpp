#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topiclear/types.hpp"

namespace topiclear {

// Lowercases ASCII letters and splits on ASCII characters that are not
// letters or digits. Bytes >= 0x80 count as word characters so UTF-8 words
// stay whole. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Corpus tokenized once into integer ids; vocabulary ids follow first
// occurrence order.
struct TokenizedCorpus {
    std::vector<std::string> vocab;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> docs;

    static TokenizedCorpus from_texts(const std::vector<std::string>& texts);
    static TokenizedCorpus from_corpus(const Corpus& corpus);

    std::size_t size() const { return docs.size(); }
    int id_of(std::string_view word) const;  // -1 when absent
};

}  // namespace topiclear
