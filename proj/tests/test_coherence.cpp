#include <cmath>
#include <set>

#include "test_util.hpp"
#include "topiclear/coherence.hpp"
#include "topiclear/text.hpp"

using namespace topiclear;
using namespace topiclear::metrics;

namespace {

// Enumerates windows explicitly as word sets.
std::vector<std::set<std::string>> windows_of(const std::vector<std::string>& texts, std::size_t w) {
    std::vector<std::set<std::string>> out;
    for (const auto& text : texts) {
        const auto toks = tokenize(text);
        if (toks.empty()) continue;
        if (toks.size() <= w) {
            out.emplace_back(toks.begin(), toks.end());
            continue;
        }
        for (std::size_t s = 0; s + w <= toks.size(); ++s) out.emplace_back(toks.begin() + s, toks.begin() + s + w);
    }
    return out;
}

TopicWords make_topics(const std::vector<std::vector<std::string>>& lists) {
    TopicWords tw;
    for (const auto& l : lists) {
        std::vector<ScoredWord> t;
        for (const auto& w : l) t.push_back({w, 1.0});
        tw.topics.push_back(t);
    }
    return tw;
}

const std::vector<std::string> kToy{"a b c d", "A, b e!", "c d", ""};

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("Hello, World! x2") == std::vector<std::string>{"hello", "world", "x2"});
    CHECK(tokenize("  ").empty());
    CHECK(tokenize("caf\xc3\xa9 bar") == std::vector<std::string>{"caf\xc3\xa9", "bar"});
    const auto tc = TokenizedCorpus::from_texts({"b a", "a c"});
    CHECK(tc.vocab == std::vector<std::string>{"b", "a", "c"});
    CHECK(tc.id_of("c") == 2);
    CHECK(tc.id_of("zzz") == -1);
}

TEST_CASE("window counts on a toy corpus") {
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 2);
    CHECK(stats.n_windows() == 6);
    CHECK(stats.word_count("a") == 2);
    CHECK(stats.word_count("b") == 4);
    CHECK(stats.pair_count("a", "b") == 2);
    CHECK(stats.pair_count("d", "c") == 2);
    CHECK(stats.pair_count("a", "c") == 0);
    CHECK(stats.p_word("b") == doctest::Approx(4.0 / 6.0));
    CHECK_THROWS_CONTAINING(stats.word_count("q"), "unknown word");
}

TEST_CASE("window counts agree with explicit enumeration") {
    Rng rng(6);
    const std::vector<std::string> alphabet{"p", "q", "r", "s", "t", "u"};
    std::vector<std::string> texts;
    for (int d = 0; d < 40; ++d) {
        std::string t;
        const auto len = rng.below(15);
        for (std::uint64_t i = 0; i < len; ++i) t += alphabet[rng.below(alphabet.size())] + " ";
        texts.push_back(t);
    }
    for (std::size_t w : {1u, 3u, 7u, 20u}) {
        const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(texts), w);
        const auto wins = windows_of(texts, w);
        CHECK(stats.n_windows() == wins.size());
        for (const auto& x : alphabet) {
            if (!stats.contains(x)) continue;
            std::uint64_t c = 0;
            for (const auto& win : wins) c += win.count(x);
            CHECK(stats.word_count(x) == c);
            for (const auto& y : alphabet) {
                if (y == x || !stats.contains(y)) continue;
                std::uint64_t j = 0;
                for (const auto& win : wins) j += win.count(x) && win.count(y);
                CHECK(stats.pair_count(x, y) == j);
            }
        }
    }
}

TEST_CASE("short documents form a single window") {
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 5);
    CHECK(stats.n_windows() == 3);
    CHECK(stats.pair_count("a", "d") == 1);
    CHECK_THROWS_CONTAINING(build_cooccurrence(TokenizedCorpus::from_texts({"", "..."}), 5), "empty after tokenization");
}

TEST_CASE("restricting the vocabulary keeps window counts") {
    const std::unordered_set<std::string> keep{"a", "b"};
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 2, &keep);
    CHECK(stats.vocab_size() == 2);
    CHECK(stats.n_windows() == 6);
    CHECK(stats.pair_count("a", "b") == 2);
    CHECK_FALSE(stats.contains("c"));
}

TEST_CASE("pmi and npmi values and limits") {
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 2);
    CHECK(pmi(stats, "a", "b") == doctest::Approx(std::log(1.5)));
    CHECK(npmi(stats, "a", "b") == doctest::Approx(std::log(1.5) / std::log(3.0)));
    CHECK(pmi(stats, "a", "b") == pmi(stats, "b", "a"));
    const double never = npmi(stats, "a", "c");
    CHECK(never >= -1.0);
    CHECK(never < -0.9);
    CHECK(pmi(stats, "a", "c") == doctest::Approx(std::log(1e-12 / ((2.0 / 6) * (3.0 / 6)))));

    const auto full = build_cooccurrence(TokenizedCorpus::from_texts({"x y", "y x"}), 2);
    CHECK(npmi(full, "x", "y") == 1.0);
}

TEST_CASE("topic coherence averages pair scores") {
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 2);
    const auto topics = make_topics({{"a", "b", "c"}, {"c", "d", "zz"}});
    const auto uci = coherence_uci(topics, stats);
    const double t0 = (pmi(stats, "a", "b") + pmi(stats, "a", "c") + pmi(stats, "b", "c")) / 3;
    CHECK(uci.per_topic[0] == doctest::Approx(t0));
    CHECK(uci.per_topic[1] == doctest::Approx(pmi(stats, "c", "d")));
    CHECK(uci.value == doctest::Approx((uci.per_topic[0] + uci.per_topic[1]) / 2));
    CHECK_FALSE(uci.diagnostics.empty());

    const auto np = coherence_npmi(topics, stats);
    CHECK(np.per_topic[1] == doctest::Approx(npmi(stats, "c", "d")));

    CHECK_THROWS_CONTAINING(coherence_uci(make_topics({{"a", "zz"}}), stats), "at least 2");
}

TEST_CASE("c_v is the mean cosine of npmi context vectors") {
    const auto stats = build_cooccurrence(TokenizedCorpus::from_texts(kToy), 3);
    const std::vector<std::string> words{"a", "b", "c", "e"};
    std::vector<Eigen::VectorXd> ctx;
    for (const auto& wi : words) {
        Eigen::VectorXd v(4);
        for (std::size_t j = 0; j < 4; ++j) v(static_cast<Eigen::Index>(j)) = wi == words[j] ? 1.0 : npmi(stats, wi, words[j]);
        ctx.push_back(v);
    }
    double sum = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j, ++pairs) sum += ctx[i].dot(ctx[j]) / (ctx[i].norm() * ctx[j].norm());
    }
    const auto cv = coherence_cv(make_topics({words}), stats);
    CHECK(cv.value == doctest::Approx(sum / pairs).epsilon(1e-12));
    CHECK(cv.value <= 1.0);
    CHECK(cv.value >= -1.0);
}
