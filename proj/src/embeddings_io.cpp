#include "topiclear/embeddings_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "topiclear/error.hpp"

namespace topiclear {
namespace {

template <typename T>
void put_le(std::vector<unsigned char>& buf, T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        buf.push_back(static_cast<unsigned char>(u & 0xffu));
        u = static_cast<U>(u >> 8);
    }
}

template <typename T>
T get_le(const unsigned char* p) {
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = sizeof(T); i-- > 0;) {
        u = static_cast<std::make_unsigned_t<T>>((u << 8) | p[i]);
    }
    return static_cast<T>(u);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    return in;
}

void check_stream(const std::ostream& out, const std::filesystem::path& path) {
    if (!out) throw Error("I/O failure writing '" + path.string() + "'");
}

std::string fmt_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

}  // namespace

void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
    const auto& d = m.data();
    std::vector<unsigned char> buf;
    buf.reserve(kEmbeddingHeaderBytes + static_cast<std::size_t>(d.size()) * 4);
    buf.insert(buf.end(), std::begin(kEmbeddingMagic), std::end(kEmbeddingMagic));
    put_le<std::uint32_t>(buf, kEmbeddingVersion);
    put_le<std::uint64_t>(buf, m.n_docs());
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(m.dim()));
    put_le<std::uint8_t>(buf, static_cast<std::uint8_t>(m.stage()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const float f = static_cast<float>(d.data()[i]);
        if (!std::isfinite(f)) {
            throw Error("non-finite entry at row " + std::to_string(i / d.cols()) + ", column " +
                        std::to_string(i % d.cols()));
        }
        put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(f));
    }
    auto out = open_out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.flush();
    check_stream(out, path);
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    std::array<unsigned char, kEmbeddingHeaderBytes> hdr{};
    in.read(reinterpret_cast<char*>(hdr.data()), hdr.size());
    if (in.gcount() < 4 || std::memcmp(hdr.data(), kEmbeddingMagic, 4) != 0) {
        throw Error("bad magic in '" + path.string() + "'");
    }
    if (in.gcount() != static_cast<std::streamsize>(hdr.size())) {
        throw Error("truncated header in '" + path.string() + "'");
    }
    const auto version = get_le<std::uint32_t>(hdr.data() + 4);
    if (version != kEmbeddingVersion) {
        throw Error("version mismatch: file has " + std::to_string(version) + ", expected " +
                    std::to_string(kEmbeddingVersion));
    }
    const auto n_docs = get_le<std::uint64_t>(hdr.data() + 8);
    const auto dim = get_le<std::uint32_t>(hdr.data() + 16);
    const auto stage_code = hdr[20];
    if (stage_code > static_cast<std::uint8_t>(Stage::feature_k1)) {
        throw Error("unknown stage code " + std::to_string(stage_code));
    }
    if (dim != 0 && n_docs > (std::uint64_t{1} << 40) / dim) {
        throw Error("implausible matrix shape in header");
    }
    const std::size_t count = static_cast<std::size_t>(n_docs) * dim;
    std::vector<unsigned char> payload(count * 4);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
        throw Error("truncated payload: expected " + std::to_string(payload.size()) + " bytes, got " +
                    std::to_string(in.gcount()));
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw Error("trailing bytes after payload in '" + path.string() + "'");
    }
    RowMatrix data(static_cast<Eigen::Index>(n_docs), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < count; ++i) {
        const float f = std::bit_cast<float>(get_le<std::uint32_t>(payload.data() + 4 * i));
        if (!std::isfinite(f)) {
            throw Error("non-finite entry at row " + std::to_string(i / dim) + ", column " +
                        std::to_string(i % dim));
        }
        data.data()[i] = static_cast<double>(f);
    }
    return EmbeddingMatrix(std::move(data), static_cast<Stage>(stage_code));
}

Corpus read_corpus(const std::filesystem::path& path) {
    auto in = open_in(path);
    Corpus corpus;
    std::map<int, std::string> names;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed JSON at line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("doc_id") || !j.contains("text") || !j["text"].is_string()) {
            throw Error("line " + std::to_string(line_no) + ": expected object with doc_id and text");
        }
        Document doc;
        const auto& id = j["doc_id"];
        if (id.is_string()) {
            doc.doc_id = id.get<std::string>();
        } else if (id.is_number_integer()) {
            doc.doc_id = id.dump();
        } else {
            throw Error("line " + std::to_string(line_no) + ": doc_id must be a string or integer");
        }
        doc.text = j["text"].get<std::string>();
        if (j.contains("gold_label") && !j["gold_label"].is_null()) {
            if (!j["gold_label"].is_number_integer()) {
                throw Error("line " + std::to_string(line_no) + ": gold_label must be an integer");
            }
            doc.gold_label = j["gold_label"].get<int>();
            if (j.contains("label_name") && j["label_name"].is_string()) {
                const auto name = j["label_name"].get<std::string>();
                auto [it, inserted] = names.emplace(*doc.gold_label, name);
                if (!inserted && it->second != name) {
                    throw Error("line " + std::to_string(line_no) + ": label " +
                                std::to_string(*doc.gold_label) + " named both '" + it->second +
                                "' and '" + name + "'");
                }
            }
        }
        corpus.docs.push_back(std::move(doc));
    }
    if (!names.empty()) {
        const int count = names.rbegin()->first + 1;
        if (names.begin()->first < 0 || static_cast<int>(names.size()) != count) {
            throw Error("label_name entries do not cover labels 0.." + std::to_string(count - 1));
        }
        for (auto& [label, name] : names) corpus.label_names.push_back(std::move(name));
    }
    corpus.validate();
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    corpus.validate();
    auto out = open_out(path);
    for (const auto& d : corpus.docs) {
        nlohmann::ordered_json j;
        j["doc_id"] = d.doc_id;
        j["text"] = d.text;
        if (d.gold_label) {
            j["gold_label"] = *d.gold_label;
            if (!corpus.label_names.empty()) {
                j["label_name"] = corpus.label_names.at(static_cast<std::size_t>(*d.gold_label));
            }
        }
        out << j.dump() << '\n';
    }
    out.flush();
    check_stream(out, path);
}

void write_assignment(const TopicAssignment& a, const std::filesystem::path& path) {
    a.validate();
    std::string text = "doc_index,topic";
    if (a.gamma) {
        for (int j = 0; j < a.k; ++j) text += ",p" + std::to_string(j);
    }
    text += '\n';
    for (std::size_t n = 0; n < a.h.size(); ++n) {
        text += std::to_string(n);
        text += ',';
        text += std::to_string(a.h[n]);
        if (a.gamma) {
            for (int j = 0; j < a.k; ++j) {
                text += ',';
                text += fmt_double((*a.gamma)(static_cast<Eigen::Index>(n), j));
            }
        }
        text += '\n';
    }
    auto out = open_out(path, std::ios::binary);
    out << text;
    out.flush();
    check_stream(out, path);
}

TopicAssignment read_assignment(const std::filesystem::path& path, std::optional<int> expected_k) {
    auto in = open_in(path, std::ios::binary);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty assignment file '" + path.string() + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };

    const auto header = split(line);
    if (header.size() < 2 || header[0] != "doc_index" || header[1] != "topic") {
        throw Error("assignment header must start with doc_index,topic");
    }
    const int n_prob = static_cast<int>(header.size()) - 2;
    for (int j = 0; j < n_prob; ++j) {
        if (header[static_cast<std::size_t>(j) + 2] != "p" + std::to_string(j)) {
            throw Error("unexpected assignment column '" + header[static_cast<std::size_t>(j) + 2] + "'");
        }
    }
    if (n_prob > 0 && expected_k && *expected_k != n_prob) {
        throw Error("assignment has " + std::to_string(n_prob) + " posterior columns, expected K = " +
                    std::to_string(*expected_k));
    }

    auto parse_int = [&](const std::string& s, std::size_t line_no) {
        long long v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) {
            throw Error("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
        }
        return v;
    };
    auto parse_double = [&](const std::string& s, std::size_t line_no) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
            throw Error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
        }
        return v;
    };

    TopicAssignment a;
    std::vector<double> probs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " columns");
        }
        const auto idx = parse_int(cells[0], line_no);
        if (idx != static_cast<long long>(a.h.size())) {
            throw Error("line " + std::to_string(line_no) + ": doc_index " + cells[0] + " out of sequence");
        }
        const auto topic = parse_int(cells[1], line_no);
        if (topic < 0 || topic > INT32_MAX) {
            throw Error("line " + std::to_string(line_no) + ": topic " + cells[1] + " out of range");
        }
        a.h.push_back(static_cast<int>(topic));
        for (int j = 0; j < n_prob; ++j) probs.push_back(parse_double(cells[static_cast<std::size_t>(j) + 2], line_no));
    }

    if (n_prob > 0) {
        a.k = n_prob;
        RowMatrix g(static_cast<Eigen::Index>(a.h.size()), n_prob);
        std::copy(probs.begin(), probs.end(), g.data());
        a.gamma = std::move(g);
    } else if (expected_k) {
        a.k = *expected_k;
    } else {
        int top = 0;
        for (int t : a.h) top = std::max(top, t);
        a.k = top + 1;
    }
    // Text round-trips of posteriors carry at most ~1e-16 error, but files
    // written by other tools may be rounded.
    a.validate(1e-6);
    return a;
}

}  // namespace topiclear
