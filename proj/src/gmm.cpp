#include "topiclear/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "topiclear/error.hpp"
#include "topiclear/kernels.hpp"
#include "topiclear/kmeans.hpp"
#include "topiclear/parallel.hpp"
#include "topiclear/rng.hpp"

namespace topiclear {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Below this total responsibility a component counts as empty.
constexpr double kEmptyComponent = 1e-8;

// Inverse Cholesky factor of each covariance plus the Gaussian log
// normalizer, so log N(y) = norm - 0.5 * |Linv (y - mu)|^2.
struct Factorized {
    std::vector<RowMatrix> inv_chol;
    std::vector<double> log_norm;
};

Factorized factorize(const GmmModel& m) {
    const auto d = static_cast<Eigen::Index>(m.dim());
    Factorized f;
    for (int c = 0; c < m.k; ++c) {
        Eigen::LLT<Eigen::MatrixXd> llt(m.covariances[static_cast<std::size_t>(c)]);
        if (llt.info() != Eigen::Success) {
            throw Error("covariance of component " + std::to_string(c) +
                        " is not positive-definite; increase reg_covar");
        }
        const Eigen::MatrixXd lower = llt.matrixL();
        RowMatrix inv = lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(lower(i, i));
        f.inv_chol.push_back(std::move(inv));
        f.log_norm.push_back(-0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det));
    }
    return f;
}

// log_resp[n, c] = log pi_c + log N(y_n | c) - log p(y_n); returns mean log p(y_n).
double e_step(const GmmModel& m, const RowMatrix& y, RowMatrix& log_resp) {
    const auto f = factorize(m);
    const auto n = static_cast<std::size_t>(y.rows());
    const auto dim = static_cast<std::size_t>(y.cols());
    log_resp.resize(y.rows(), m.k);
    std::vector<double> row_norm(n);
    Eigen::VectorXd log_weights = m.weights.array().log();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> diff(dim);
        for (std::size_t i = begin; i < end; ++i) {
            const std::span<const double> row(y.data() + i * dim, dim);
            double top = -std::numeric_limits<double>::infinity();
            for (int c = 0; c < m.k; ++c) {
                kernels::subtract(row, {m.means.data() + static_cast<std::size_t>(c) * dim, dim}, diff);
                const auto& inv = f.inv_chol[static_cast<std::size_t>(c)];
                double maha = 0.0;
                for (std::size_t r = 0; r < dim; ++r) {
                    const double z = kernels::dot({inv.data() + r * dim, r + 1}, {diff.data(), r + 1});
                    maha += z * z;
                }
                const double lp = log_weights(c) + f.log_norm[static_cast<std::size_t>(c)] - 0.5 * maha;
                log_resp(static_cast<Eigen::Index>(i), c) = lp;
                top = std::max(top, lp);
            }
            double acc = 0.0;
            for (int c = 0; c < m.k; ++c) acc += std::exp(log_resp(static_cast<Eigen::Index>(i), c) - top);
            const double lse = top + std::log(acc);
            for (int c = 0; c < m.k; ++c) log_resp(static_cast<Eigen::Index>(i), c) -= lse;
            row_norm[i] = lse;
        }
    });
    double total = 0.0;
    for (double v : row_norm) total += v;
    const double mean = total / static_cast<double>(n);
    if (!std::isfinite(mean)) throw Error("EM produced a non-finite log-likelihood");
    return mean;
}

// M-step from responsibilities (not log). Components whose total
// responsibility vanishes are re-seeded on the worst-explained point with the
// pooled covariance.
void m_step(GmmModel& m, const RowMatrix& y, const RowMatrix& resp, double reg_covar) {
    const auto n = y.rows();
    const auto d = y.cols();
    Eigen::VectorXd nk = resp.colwise().sum().transpose();
    m.means.resize(m.k, d);
    m.covariances.assign(static_cast<std::size_t>(m.k), Eigen::MatrixXd::Zero(d, d));

    std::vector<int> empty;
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
    double pooled_mass = 0.0;
    for (int c = 0; c < m.k; ++c) {
        if (nk(c) < kEmptyComponent) {
            empty.push_back(c);
            continue;
        }
        const double mass = nk(c) + 10 * kEps;
        m.means.row(c) = (resp.col(c).transpose() * y) / mass;
        RowMatrix diff = y.rowwise() - m.means.row(c);
        Eigen::MatrixXd cov = (diff.array().colwise() * resp.col(c).array()).matrix().transpose() * diff / mass;
        pooled += nk(c) * cov;
        pooled_mass += nk(c);
        cov.diagonal().array() += reg_covar;
        m.covariances[static_cast<std::size_t>(c)] = 0.5 * (cov + cov.transpose());
    }

    if (!empty.empty()) {
        pooled /= std::max(pooled_mass, 1.0);
        pooled.diagonal().array() += reg_covar;
        std::vector<double> confidence(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) confidence[static_cast<std::size_t>(i)] = resp.row(i).maxCoeff();
        for (int c : empty) {
            const auto worst = std::min_element(confidence.begin(), confidence.end()) - confidence.begin();
            m.means.row(c) = y.row(worst);
            m.covariances[static_cast<std::size_t>(c)] = 0.5 * (pooled + pooled.transpose());
            nk(c) = 1.0;
            confidence[static_cast<std::size_t>(worst)] = std::numeric_limits<double>::infinity();
            ++m.reseeds;
        }
    }
    m.weights = (nk.array() + 10 * kEps).matrix();
    m.weights /= m.weights.sum();
}

GmmModel fit_once(const RowMatrix& y, int k, std::uint64_t seed, const GmmOptions& opts) {
    GmmModel m;
    m.k = k;
    m.seed = seed;

    const auto km = kmeans_fit(y, k, seed, opts.kmeans_iterations);
    RowMatrix resp = RowMatrix::Zero(y.rows(), k);
    for (std::size_t i = 0; i < km.labels.size(); ++i) resp(static_cast<Eigen::Index>(i), km.labels[i]) = 1.0;
    m_step(m, y, resp, opts.reg_covar);

    RowMatrix log_resp;
    double lb = e_step(m, y, log_resp);
    m.log_likelihood_trace.push_back(lb);
    for (int it = 1; it <= opts.max_iter; ++it) {
        m.n_iter = it;
        resp = log_resp.array().exp().matrix();
        m_step(m, y, resp, opts.reg_covar);
        const double prev = lb;
        lb = e_step(m, y, log_resp);
        m.log_likelihood_trace.push_back(lb);
        if (std::abs(lb - prev) < opts.tol) {
            m.converged = true;
            break;
        }
    }
    return m;
}

}  // namespace

GmmModel gmm_fit(const EmbeddingMatrix& y, int k, std::uint64_t seed, const GmmOptions& opts) {
    if (k < 1) throw Error("gmm_fit: k must be positive");
    if (static_cast<std::size_t>(k) > y.n_docs()) {
        throw Error("gmm_fit: k = " + std::to_string(k) + " exceeds the number of rows " + std::to_string(y.n_docs()));
    }
    if (y.dim() < 1) throw Error("gmm_fit: data must have at least one column");
    if (opts.max_iter < 0 || opts.n_init < 1 || !(opts.tol >= 0) || !(opts.reg_covar >= 0)) {
        throw Error("gmm_fit: invalid options");
    }
    GmmModel best;
    bool have = false;
    for (int init = 0; init < opts.n_init; ++init) {
        auto m = fit_once(y.data(), k, derive_seed(seed, static_cast<std::uint64_t>(init)), opts);
        if (!have || m.log_likelihood() > best.log_likelihood()) {
            best = std::move(m);
            have = true;
        }
    }
    best.seed = seed;
    return best;
}

TopicAssignment gmm_posteriors(const GmmModel& model, const EmbeddingMatrix& y) {
    if (y.dim() != model.dim()) {
        throw Error("gmm_posteriors: data has dim " + std::to_string(y.dim()) + ", model expects " +
                    std::to_string(model.dim()));
    }
    RowMatrix log_resp;
    e_step(model, y.data(), log_resp);
    return TopicAssignment::from_posteriors(log_resp.array().exp().matrix());
}

double gmm_mean_log_likelihood(const GmmModel& model, const EmbeddingMatrix& y) {
    if (y.dim() != model.dim()) throw Error("gmm_mean_log_likelihood: dimension mismatch");
    RowMatrix log_resp;
    return e_step(model, y.data(), log_resp);
}

GmmModel permute_components(const GmmModel& model, std::span<const int> order) {
    if (order.size() != static_cast<std::size_t>(model.k)) throw Error("permute_components: wrong order length");
    GmmModel out = model;
    for (int j = 0; j < model.k; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.weights(j) = model.weights(src);
        out.means.row(j) = model.means.row(src);
        out.covariances[static_cast<std::size_t>(j)] = model.covariances[static_cast<std::size_t>(src)];
    }
    return out;
}

}  // namespace topiclear
