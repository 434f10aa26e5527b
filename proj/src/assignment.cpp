#include "mulcanon/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mulcanon {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double softplus(double x) {
    if (x > 30.0) return x;
    return std::log1p(std::exp(x));
}

double softplus_inverse(double y) {
    // y > 0
    if (y > 30.0) return y;
    return std::log(std::expm1(y));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sum_exp(const Eigen::VectorXd& a) {
    double m = a.maxCoeff();
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += std::exp(a[i] - m);
    return m + std::log(s);
}

}  // namespace

GaussianMixture GaussianMixture::from_seed(const MixtureSeed& seed) {
    GaussianMixture gm;
    gm.k = static_cast<int>(seed.means.rows());
    gm.d = static_cast<int>(seed.means.cols());
    gm.means = seed.means;
    gm.var_raw.resize(gm.k, gm.d);
    for (int c = 0; c < gm.k; ++c)
        for (int j = 0; j < gm.d; ++j) {
            double excess = std::max(seed.variances(c, j) - kVarianceFloor, 1e-8);
            gm.var_raw(c, j) = softplus_inverse(excess);
        }
    gm.prior_logits.resize(gm.k);
    for (int c = 0; c < gm.k; ++c) gm.prior_logits[c] = std::log(seed.priors[c]);
    return gm;
}

Eigen::MatrixXd GaussianMixture::variances() const {
    Eigen::MatrixXd v(k, d);
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < d; ++j) v(c, j) = kVarianceFloor + softplus(var_raw(c, j));
    return v;
}

Eigen::VectorXd GaussianMixture::priors() const {
    double lse = log_sum_exp(prior_logits);
    Eigen::VectorXd p(k);
    for (int c = 0; c < k; ++c) p[c] = std::exp(prior_logits[c] - lse);
    return p;
}

std::size_t GaussianMixture::param_count() const {
    return static_cast<std::size_t>(means.size() + var_raw.size() + prior_logits.size());
}

void GaussianMixture::to_flat(double* out) const {
    std::copy(means.data(), means.data() + means.size(), out);
    out += means.size();
    std::copy(var_raw.data(), var_raw.data() + var_raw.size(), out);
    out += var_raw.size();
    std::copy(prior_logits.data(), prior_logits.data() + prior_logits.size(), out);
}

void GaussianMixture::from_flat(const double* in) {
    std::copy(in, in + means.size(), means.data());
    in += means.size();
    std::copy(in, in + var_raw.size(), var_raw.data());
    in += var_raw.size();
    std::copy(in, in + prior_logits.size(), prior_logits.data());
}

GaussianMixtureGrad GaussianMixtureGrad::zero(const GaussianMixture& gm) {
    GaussianMixtureGrad g;
    g.means = Eigen::MatrixXd::Zero(gm.k, gm.d);
    g.var_raw = Eigen::MatrixXd::Zero(gm.k, gm.d);
    g.prior_logits = Eigen::VectorXd::Zero(gm.k);
    return g;
}

void GaussianMixtureGrad::to_flat(double* out) const {
    std::copy(means.data(), means.data() + means.size(), out);
    out += means.size();
    std::copy(var_raw.data(), var_raw.data() + var_raw.size(), out);
    out += var_raw.size();
    std::copy(prior_logits.data(), prior_logits.data() + prior_logits.size(), out);
}

Eigen::VectorXd posterior(const Eigen::VectorXd& w, const GaussianMixture& mixture,
                          PosteriorCache* cache) {
    const int k = mixture.k;
    Eigen::VectorXd log_priors(k);
    double prior_lse = log_sum_exp(mixture.prior_logits);
    Eigen::MatrixXd var = mixture.variances();

    Eigen::VectorXd log_unnorm(k);
    for (int c = 0; c < k; ++c) {
        log_priors[c] = mixture.prior_logits[c] - prior_lse;
        double log_density = 0.0;
        for (int j = 0; j < mixture.d; ++j) {
            double diff = w[j] - mixture.means(c, j);
            log_density -= 0.5 * (kLog2Pi + std::log(var(c, j)) + diff * diff / var(c, j));
        }
        log_unnorm[c] = log_priors[c] + log_density;
    }
    double lse = log_sum_exp(log_unnorm);
    if (!std::isfinite(lse)) throw std::runtime_error("degenerate posterior");

    // shift-and-normalize rather than subtracting the lse: exactly uniform
    // log densities then yield exactly uniform posteriors
    double shift = log_unnorm.maxCoeff();
    Eigen::VectorXd v(k);
    for (int c = 0; c < k; ++c) v[c] = std::exp(log_unnorm[c] - shift);
    v /= v.sum();
    if (cache) {
        cache->log_unnorm = log_unnorm;
        cache->v = v;
    }
    return v;
}

Eigen::VectorXd posterior_backward(const Eigen::VectorXd& w, const GaussianMixture& mixture,
                                   const PosteriorCache& cache, const Eigen::VectorXd& dv,
                                   GaussianMixtureGrad& grad) {
    const int k = mixture.k;
    const int d = mixture.d;
    const Eigen::VectorXd& v = cache.v;

    // softmax backward: da_c = v_c (dv_c - sum_j dv_j v_j)
    double inner = dv.dot(v);
    Eigen::VectorXd da(k);
    for (int c = 0; c < k; ++c) da[c] = v[c] * (dv[c] - inner);

    Eigen::MatrixXd var = mixture.variances();
    Eigen::VectorXd priors = mixture.priors();
    Eigen::VectorXd dw = Eigen::VectorXd::Zero(d);

    double da_sum = da.sum();
    for (int c = 0; c < k; ++c) {
        // log prior term: d a_c / d logit_m = delta_cm - p_m
        grad.prior_logits[c] += da[c];
        for (int j = 0; j < d; ++j) {
            double diff = w[j] - mixture.means(c, j);
            double inv_var = 1.0 / var(c, j);
            grad.means(c, j) += da[c] * diff * inv_var;
            double dvar = 0.5 * (diff * diff * inv_var - 1.0) * inv_var;
            grad.var_raw(c, j) += da[c] * dvar * sigmoid(mixture.var_raw(c, j));
            dw[j] -= da[c] * diff * inv_var;
        }
    }
    grad.prior_logits -= da_sum * priors;
    return dw;
}

ClusteringLossResult clustering_loss(const std::vector<Eigen::VectorXd>& latents,
                                     const std::vector<int>& targets,
                                     const GaussianMixture& mixture) {
    if (latents.size() != targets.size())
        throw std::invalid_argument("clustering_loss: batch size mismatch");
    ClusteringLossResult result;
    result.grad_mixture = GaussianMixtureGrad::zero(mixture);
    result.grad_w.reserve(latents.size());
    const double n = static_cast<double>(latents.size());

    for (std::size_t i = 0; i < latents.size(); ++i) {
        PosteriorCache cache;
        Eigen::VectorXd v = posterior(latents[i], mixture, &cache);
        int target = targets[i];
        if (target < 0 || target >= mixture.k)
            throw std::invalid_argument("clustering_loss: target out of range");
        double vt = v[target];
        if (vt < 1e-12) {
            vt = 1e-12;
            ++result.clamped_logs;
        }
        result.loss += -std::log(vt) / n;

        Eigen::VectorXd dv = Eigen::VectorXd::Zero(mixture.k);
        dv[target] = -1.0 / (vt * n);
        result.grad_w.push_back(
            posterior_backward(latents[i], mixture, cache, dv, result.grad_mixture));
    }
    return result;
}

int hard_assign(const Eigen::VectorXd& v) {
    int best = 0;
    for (int c = 1; c < v.size(); ++c)
        if (v[c] > v[best]) best = c;  // ties keep the lowest id
    return best;
}

}  // namespace mulcanon
