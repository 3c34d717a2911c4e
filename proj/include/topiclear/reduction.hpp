#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "topiclear/types.hpp"

namespace topiclear {

// Principal directions fitted on a data matrix. `components` is
// input_dim x output_dim with orthonormal columns; `explained_variance` holds
// the matching sample variances (n - 1 denominator), non-increasing.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;
    Eigen::VectorXd explained_variance;

    std::size_t input_dim() const { return static_cast<std::size_t>(components.rows()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(components.cols()); }
};

// PCA by thin SVD of the centered matrix. Each component is sign-fixed so its
// largest-magnitude entry is positive.
PcaModel pca_fit(const EmbeddingMatrix& x, std::size_t d_out);

// (row - mean) projected on the components. The caller picks the stage tag
// of the result (pca_d for the first projection, feature_k1 when seeding the
// discriminant features).
EmbeddingMatrix pca_transform(const PcaModel& model, const EmbeddingMatrix& x, Stage out_stage = Stage::pca_d);

// Maps projected coordinates back to the input space.
RowMatrix pca_inverse_transform(const PcaModel& model, const RowMatrix& coords);

// Divides every row by its L2 norm. Zero rows are an error naming the row.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& x);

struct ScatterMatrices {
    Eigen::MatrixXd within;   // S_W
    Eigen::MatrixXd between;  // S_B
    std::vector<std::size_t> class_sizes;
    int populated = 0;
};

// Within/between-class scatter over the classes present in `labels`; empty
// classes are skipped.
ScatterMatrices scatter_matrices(const EmbeddingMatrix& y, std::span<const int> labels, int k);

// tr(W^T S_B W) / tr(W^T S_W W).
double trace_ratio(const Eigen::MatrixXd& between, const Eigen::MatrixXd& within, const Eigen::MatrixXd& w);

struct LdaModel {
    Eigen::MatrixXd projection;  // D x (K - 1), unit-norm columns
    Eigen::VectorXd eigenvalues; // generalized eigenvalues of the kept columns, descending
    int k = 0;
    double regularization = 0.0;
    int populated_classes = 0;
    // Trace-ratio objective at `projection` using the unregularized S_W.
    double objective = 0.0;

    std::size_t input_dim() const { return static_cast<std::size_t>(projection.rows()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(projection.cols()); }
};

// Default ridge added to S_W: 1e-6 * trace(S_W) / D.
double default_lda_regularization(const Eigen::MatrixXd& within);

// Multiclass Fisher discriminant: the K - 1 leading generalized eigenvectors
// of S_B w = lambda (S_W + reg I) w, where K = assignment.k. Classes missing
// from the assignment are skipped in the scatter sums but the projection
// still has K - 1 columns.
LdaModel lda_fit(const EmbeddingMatrix& y, const TopicAssignment& assignment,
                 std::optional<double> reg = std::nullopt);

EmbeddingMatrix lda_transform(const LdaModel& model, const EmbeddingMatrix& y);

}  // namespace topiclear
