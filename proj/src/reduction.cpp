#include "topiclear/reduction.hpp"

#include <cmath>

#include "topiclear/error.hpp"
#include "topiclear/kernels.hpp"
#include "topiclear/parallel.hpp"

namespace topiclear {
namespace {

// Flip each column so that its largest-magnitude entry (first one on ties)
// is positive.
void fix_signs(Eigen::MatrixXd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > std::abs(m(arg, j))) arg = i;
        }
        if (m(arg, j) < 0) m.col(j) = -m.col(j);
    }
}

// out[n, :] = (x[n, :] - offset) * basis, with basis given column-wise.
RowMatrix project_rows(const RowMatrix& x, const Eigen::VectorXd* offset, const Eigen::MatrixXd& basis) {
    const RowMatrix basis_t = basis.transpose();
    const auto dim = static_cast<std::size_t>(x.cols());
    RowMatrix out(x.rows(), basis.cols());
    parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t begin, std::size_t end) {
        std::vector<double> centered(dim);
        for (std::size_t n = begin; n < end; ++n) {
            std::span<const double> row(x.data() + n * dim, dim);
            if (offset != nullptr) {
                kernels::subtract(row, {offset->data(), dim}, centered);
                row = centered;
            }
            for (Eigen::Index j = 0; j < basis_t.rows(); ++j) {
                out(static_cast<Eigen::Index>(n), j) = kernels::dot(row, {basis_t.data() + j * basis_t.cols(), dim});
            }
        }
    });
    return out;
}

}  // namespace

PcaModel pca_fit(const EmbeddingMatrix& x, std::size_t d_out) {
    const auto n = x.n_docs();
    if (n < 2) throw Error("pca_fit needs at least 2 rows, got " + std::to_string(n));
    if (d_out < 1 || d_out > std::min(n, x.dim())) {
        throw Error("pca_fit: d_out = " + std::to_string(d_out) + " must lie in [1, min(n_docs, dim)] = [1, " +
                    std::to_string(std::min(n, x.dim())) + "]");
    }
    PcaModel model;
    model.mean = x.data().colwise().mean().transpose();
    Eigen::MatrixXd centered = x.data().rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const auto k = static_cast<Eigen::Index>(d_out);
    model.components = svd.matrixV().leftCols(k);
    fix_signs(model.components);
    const Eigen::VectorXd s = svd.singularValues();
    model.explained_variance.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        model.explained_variance(i) = i < s.size() ? s(i) * s(i) / static_cast<double>(n - 1) : 0.0;
    }
    return model;
}

EmbeddingMatrix pca_transform(const PcaModel& model, const EmbeddingMatrix& x, Stage out_stage) {
    if (x.dim() != model.input_dim()) {
        throw Error("pca_transform: input has dim " + std::to_string(x.dim()) + ", model expects " +
                    std::to_string(model.input_dim()));
    }
    return EmbeddingMatrix(project_rows(x.data(), &model.mean, model.components), out_stage);
}

RowMatrix pca_inverse_transform(const PcaModel& model, const RowMatrix& coords) {
    if (static_cast<std::size_t>(coords.cols()) != model.output_dim()) {
        throw Error("pca_inverse_transform: dimension mismatch");
    }
    RowMatrix out = coords * model.components.transpose();
    out.rowwise() += model.mean.transpose();
    return out;
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& x) {
    RowMatrix out = x.data();
    const auto dim = x.dim();
    for (std::size_t n = 0; n < x.n_docs(); ++n) {
        std::span<double> row(out.data() + n * dim, dim);
        const double norm = std::sqrt(kernels::squared_norm(row));
        if (!(norm > 0.0)) throw Error("l2_normalize: row " + std::to_string(n) + " has zero norm");
        for (double& v : row) v /= norm;
    }
    return EmbeddingMatrix(std::move(out), Stage::normalized);
}

ScatterMatrices scatter_matrices(const EmbeddingMatrix& y, std::span<const int> labels, int k) {
    if (labels.size() != y.n_docs()) {
        throw Error("scatter_matrices: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(y.n_docs()) + " rows");
    }
    const auto dim = y.dim();
    const auto d = static_cast<Eigen::Index>(dim);
    ScatterMatrices s;
    s.class_sizes.assign(static_cast<std::size_t>(k), 0);
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(d, k);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        const int c = labels[n];
        if (c < 0 || c >= k) throw Error("label " + std::to_string(c) + " outside [0, " + std::to_string(k) + ")");
        ++s.class_sizes[static_cast<std::size_t>(c)];
        kernels::axpy(1.0, y.row(n), {sums.col(c).data(), dim});
    }
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(d, k);
    for (int c = 0; c < k; ++c) {
        if (s.class_sizes[static_cast<std::size_t>(c)] == 0) continue;
        ++s.populated;
        means.col(c) = sums.col(c) / static_cast<double>(s.class_sizes[static_cast<std::size_t>(c)]);
    }
    const Eigen::VectorXd global = sums.rowwise().sum() / static_cast<double>(y.n_docs());

    // S_W accumulated row by row with rank-1 updates of a row-major buffer.
    RowMatrix within = RowMatrix::Zero(d, d);
    std::vector<double> diff(dim);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        kernels::subtract(y.row(n), {means.col(labels[n]).data(), dim}, diff);
        for (std::size_t i = 0; i < dim; ++i) {
            kernels::axpy(diff[i], diff, {within.data() + i * dim, dim});
        }
    }
    s.within = 0.5 * (within + within.transpose());
    s.between = Eigen::MatrixXd::Zero(d, d);
    for (int c = 0; c < k; ++c) {
        const auto size = s.class_sizes[static_cast<std::size_t>(c)];
        if (size == 0) continue;
        const Eigen::VectorXd delta = means.col(c) - global;
        s.between.noalias() += static_cast<double>(size) * delta * delta.transpose();
    }
    if (!s.within.allFinite() || !s.between.allFinite()) throw Error("non-finite scatter matrix");
    return s;
}

double trace_ratio(const Eigen::MatrixXd& between, const Eigen::MatrixXd& within, const Eigen::MatrixXd& w) {
    const double num = (w.transpose() * between * w).trace();
    const double den = (w.transpose() * within * w).trace();
    return num / den;
}

double default_lda_regularization(const Eigen::MatrixXd& within) {
    return 1e-6 * within.trace() / static_cast<double>(within.rows());
}

LdaModel lda_fit(const EmbeddingMatrix& y, const TopicAssignment& assignment, std::optional<double> reg) {
    const int k = assignment.k;
    if (k < 2) throw Error("lda_fit needs K >= 2");
    if (static_cast<std::size_t>(k - 1) > y.dim()) {
        throw Error("lda_fit: K - 1 = " + std::to_string(k - 1) + " exceeds input dimension " +
                    std::to_string(y.dim()));
    }
    if (reg && !(*reg >= 0.0)) throw Error("lda_fit: regularization must be >= 0");
    const auto s = scatter_matrices(y, assignment.h, k);
    if (s.populated < 2) {
        throw Error("lda_fit: only " + std::to_string(s.populated) + " populated class; need at least 2");
    }

    LdaModel model;
    model.k = k;
    model.populated_classes = s.populated;
    model.regularization = reg ? *reg : default_lda_regularization(s.within);
    const auto d = s.within.rows();
    const Eigen::MatrixXd within_reg = s.within + model.regularization * Eigen::MatrixXd::Identity(d, d);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s.between, within_reg);
    if (ges.info() != Eigen::Success) {
        throw Error("lda_fit: within-class scatter is singular; use a positive regularization");
    }
    const Eigen::Index out = k - 1;
    model.projection.resize(d, out);
    model.eigenvalues.resize(out);
    for (Eigen::Index j = 0; j < out; ++j) {
        // Eigenvalues come back ascending.
        const Eigen::Index src = d - 1 - j;
        model.projection.col(j) = ges.eigenvectors().col(src).normalized();
        model.eigenvalues(j) = ges.eigenvalues()(src);
    }
    fix_signs(model.projection);
    if (!model.projection.allFinite()) throw Error("lda_fit: non-finite projection");
    model.objective = trace_ratio(s.between, s.within, model.projection);
    return model;
}

EmbeddingMatrix lda_transform(const LdaModel& model, const EmbeddingMatrix& y) {
    if (y.dim() != model.input_dim()) {
        throw Error("lda_transform: input has dim " + std::to_string(y.dim()) + ", model expects " +
                    std::to_string(model.input_dim()));
    }
    return EmbeddingMatrix(project_rows(y.data(), nullptr, model.projection), Stage::feature_k1);
}

}  // namespace topiclear
