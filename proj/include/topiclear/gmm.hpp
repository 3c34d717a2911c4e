#pragma once

#include <cstdint>
#include <vector>

#include "topiclear/types.hpp"

namespace topiclear {

// Defaults follow the usual full-covariance EM toolkit settings.
struct GmmOptions {
    int max_iter = 100;
    double tol = 1e-3;        // on the change of mean log-likelihood
    double reg_covar = 1e-6;  // added to every covariance diagonal
    int n_init = 1;
    int kmeans_iterations = 10;
};

struct GmmModel {
    int k = 0;
    Eigen::VectorXd weights;
    RowMatrix means;                          // k x d
    std::vector<Eigen::MatrixXd> covariances; // k of d x d
    // Mean log-likelihood of each successive parameter set, starting with
    // the k-means initialization; one entry per EM iteration after that.
    std::vector<double> log_likelihood_trace;
    int n_iter = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    // Components re-seeded after collapsing to zero responsibility.
    int reseeds = 0;

    std::size_t dim() const { return static_cast<std::size_t>(means.cols()); }
    double log_likelihood() const { return log_likelihood_trace.empty() ? 0.0 : log_likelihood_trace.back(); }
};

// EM for a full-covariance mixture, initialized from a seeded k-means run.
// With n_init > 1 the restart with the highest final log-likelihood wins.
GmmModel gmm_fit(const EmbeddingMatrix& y, int k, std::uint64_t seed, const GmmOptions& opts = {});

// Posteriors via log-space accumulation plus maximum-posterior labels.
TopicAssignment gmm_posteriors(const GmmModel& model, const EmbeddingMatrix& y);

// Mean per-row log-likelihood under the model.
double gmm_mean_log_likelihood(const GmmModel& model, const EmbeddingMatrix& y);

// Reorders components; `order[j]` is the old index of new component j.
GmmModel permute_components(const GmmModel& model, std::span<const int> order);

}  // namespace topiclear
