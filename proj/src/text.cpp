#include "topiclear/text.hpp"

namespace topiclear {
namespace {

bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_word_byte(c)) {
            cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

TokenizedCorpus TokenizedCorpus::from_texts(const std::vector<std::string>& texts) {
    TokenizedCorpus tc;
    tc.docs.reserve(texts.size());
    for (const auto& t : texts) {
        std::vector<int> ids;
        for (auto& tok : tokenize(t)) {
            auto [it, inserted] = tc.index.emplace(tok, static_cast<int>(tc.vocab.size()));
            if (inserted) tc.vocab.push_back(std::move(tok));
            ids.push_back(it->second);
        }
        tc.docs.push_back(std::move(ids));
    }
    return tc;
}

TokenizedCorpus TokenizedCorpus::from_corpus(const Corpus& corpus) {
    std::vector<std::string> texts;
    texts.reserve(corpus.size());
    for (const auto& d : corpus.docs) texts.push_back(d.text);
    return from_texts(texts);
}

int TokenizedCorpus::id_of(std::string_view word) const {
    auto it = index.find(std::string(word));
    return it == index.end() ? -1 : it->second;
}

}  // namespace topiclear
