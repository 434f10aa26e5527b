#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mulcanon/hac.hpp"

namespace mulcanon {

/// Trainable mixture parameters. Priors live on unconstrained logits, and
/// variances on softplus-parametrized raws with a floor, so the simplex and
/// positivity invariants survive gradient updates.
struct GaussianMixture {
    int k = 0;
    int d = 0;
    Eigen::MatrixXd means;         // k x d
    Eigen::MatrixXd var_raw;       // k x d; sigma2 = floor + softplus(var_raw)
    Eigen::VectorXd prior_logits;  // k

    static GaussianMixture from_seed(const MixtureSeed& seed);

    Eigen::MatrixXd variances() const;
    Eigen::VectorXd priors() const;

    std::size_t param_count() const;
    void to_flat(double* out) const;
    void from_flat(const double* in);
};

struct GaussianMixtureGrad {
    Eigen::MatrixXd means;
    Eigen::MatrixXd var_raw;
    Eigen::VectorXd prior_logits;

    static GaussianMixtureGrad zero(const GaussianMixture& gm);
    void to_flat(double* out) const;
};

struct PosteriorCache {
    Eigen::VectorXd log_unnorm;  // log p(c) + log N(w; mu_c, sigma_c^2)
    Eigen::VectorXd v;
};

/// Mixture-membership posterior, computed in the log domain.
Eigen::VectorXd posterior(const Eigen::VectorXd& w, const GaussianMixture& mixture,
                          PosteriorCache* cache = nullptr);

/// Backprop dL/dv through the posterior; accumulates mixture parameter
/// gradients and returns dL/dw.
Eigen::VectorXd posterior_backward(const Eigen::VectorXd& w, const GaussianMixture& mixture,
                                   const PosteriorCache& cache, const Eigen::VectorXd& dv,
                                   GaussianMixtureGrad& grad);

struct ClusteringLossResult {
    double loss = 0.0;
    GaussianMixtureGrad grad_mixture;
    std::vector<Eigen::VectorXd> grad_w;  // per latent
    long clamped_logs = 0;  // weak label fell on a collapsed posterior entry
};

/// Mean cross-entropy of posteriors against one-hot weak labels (targets are
/// cluster indices).
ClusteringLossResult clustering_loss(const std::vector<Eigen::VectorXd>& latents,
                                     const std::vector<int>& targets,
                                     const GaussianMixture& mixture);

int hard_assign(const Eigen::VectorXd& v);

}  // namespace mulcanon
