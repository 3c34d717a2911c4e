#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace topiclear {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Which step of the pipeline produced a matrix. Values are the on-disk codes.
enum class Stage : std::uint8_t {
    raw = 0,
    pca_d = 1,
    normalized = 2,
    feature_k1 = 3,
};

const char* stage_name(Stage s);

// Dense row-per-document matrix. Entries are always finite; normalized
// matrices have unit-norm rows (to 1e-9) when produced in memory.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(RowMatrix data, Stage stage);

    std::size_t n_docs() const { return static_cast<std::size_t>(data_.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(data_.cols()); }
    Stage stage() const { return stage_; }

    const RowMatrix& data() const { return data_; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * dim(), dim()};
    }

private:
    RowMatrix data_;
    Stage stage_ = Stage::raw;
};

struct Document {
    std::string doc_id;
    std::string text;
    std::optional<int> gold_label;
};

struct Corpus {
    std::vector<Document> docs;
    std::vector<std::string> label_names;

    std::size_t size() const { return docs.size(); }
    bool has_gold_labels() const { return !docs.empty() && docs.front().gold_label.has_value(); }
    // Number of gold categories: label_names.size() when names are known,
    // otherwise one past the largest label.
    int label_count() const;
    std::vector<int> gold_labels() const;

    // Throws Error when doc ids repeat, labels are partial or out of range.
    void validate() const;
};

// Hard assignment h plus optional N x K posterior matrix.
struct TopicAssignment {
    std::vector<int> h;
    std::optional<RowMatrix> gamma;
    int k = 0;

    std::size_t size() const { return h.size(); }

    // h_n = argmax_k gamma[n, k], ties to the lowest index.
    static TopicAssignment from_posteriors(RowMatrix gamma);

    // Checks label range, gamma row sums (within `row_sum_tol`) and argmax
    // consistency.
    void validate(double row_sum_tol = 1e-9) const;
};

}  // namespace topiclear
