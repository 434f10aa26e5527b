#include "mulcanon/diffusion.hpp"

#include <cmath>
#include <stdexcept>

namespace mulcanon {

Eigen::VectorXd standard_normal(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    return v;
}

NoiseSchedule NoiseSchedule::linear(int T, double beta_start, double beta_end) {
    if (T < 1) throw std::invalid_argument("schedule needs T >= 1");
    Eigen::VectorXd betas(T);
    for (int t = 0; t < T; ++t)
        betas[t] = T == 1 ? beta_start
                          : beta_start + (beta_end - beta_start) * t / (T - 1.0);
    return custom(betas);
}

NoiseSchedule NoiseSchedule::custom(const Eigen::VectorXd& betas, bool allow_degenerate) {
    for (int t = 0; t < betas.size(); ++t) {
        bool ok = allow_degenerate ? (betas[t] >= 0.0 && betas[t] < 1.0)
                                   : (betas[t] > 0.0 && betas[t] < 1.0);
        if (!ok)
            throw std::invalid_argument("beta_" + std::to_string(t + 1) + " out of range");
    }
    NoiseSchedule s;
    s.T = static_cast<int>(betas.size());
    s.betas = betas;
    s.alphas = Eigen::VectorXd::Ones(s.T) - betas;
    return s;
}

double NoiseSchedule::alpha_bar(int t) const {
    if (t < 1 || t > T) throw std::out_of_range("alpha_bar: t out of range");
    double prod = 1.0;
    for (int s = 0; s < t; ++s) prod *= alphas[s];
    return prod;
}

DenoiserNetwork DenoiserNetwork::init(int d, std::mt19937_64& rng) {
    DenoiserNetwork net;
    net.d = d;
    const int h = 2 * d;
    auto glorot = [&rng](int rows, int cols) {
        double scale = std::sqrt(6.0 / (rows + cols));
        std::uniform_real_distribution<double> u(-scale, scale);
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
        return m;
    };
    net.W1 = glorot(h, d + 1);
    net.W2 = glorot(h, h);
    net.W3 = glorot(d, h);
    net.b1 = Eigen::VectorXd::Zero(h);
    net.b2 = Eigen::VectorXd::Zero(h);
    net.b3 = Eigen::VectorXd::Zero(d);
    return net;
}

DenoiserNetwork DenoiserNetwork::zero(int d) {
    DenoiserNetwork net;
    net.d = d;
    const int h = 2 * d;
    net.W1 = Eigen::MatrixXd::Zero(h, d + 1);
    net.W2 = Eigen::MatrixXd::Zero(h, h);
    net.W3 = Eigen::MatrixXd::Zero(d, h);
    net.b1 = Eigen::VectorXd::Zero(h);
    net.b2 = Eigen::VectorXd::Zero(h);
    net.b3 = Eigen::VectorXd::Zero(d);
    return net;
}

Eigen::VectorXd DenoiserNetwork::forward(const Eigen::VectorXd& x, double t_frac,
                                         Cache* cache) const {
    if (x.size() != d) throw std::invalid_argument("denoiser input dim mismatch");
    Eigen::VectorXd in(d + 1);
    in.head(d) = x;
    in[d] = t_frac;
    Eigen::VectorXd h1 = (W1 * in + b1).array().tanh();
    Eigen::VectorXd h2 = (W2 * h1 + b2).array().tanh();
    Eigen::VectorXd out = W3 * h2 + b3;
    if (cache) {
        cache->in = in;
        cache->h1 = h1;
        cache->h2 = h2;
        cache->out = out;
    }
    return out;
}

Eigen::VectorXd DenoiserNetwork::backward(const Cache& cache, const Eigen::VectorXd& dout,
                                          DenoiserNetwork& grad) const {
    grad.W3 += dout * cache.h2.transpose();
    grad.b3 += dout;
    Eigen::VectorXd dh2 = W3.transpose() * dout;
    Eigen::VectorXd da2 =
        dh2.array() * (1.0 - cache.h2.array().square());  // d tanh
    grad.W2 += da2 * cache.h1.transpose();
    grad.b2 += da2;
    Eigen::VectorXd dh1 = W2.transpose() * da2;
    Eigen::VectorXd da1 = dh1.array() * (1.0 - cache.h1.array().square());
    grad.W1 += da1 * cache.in.transpose();
    grad.b1 += da1;
    Eigen::VectorXd din = W1.transpose() * da1;
    return din.head(d);
}

std::size_t DenoiserNetwork::param_count() const {
    return static_cast<std::size_t>(W1.size() + W2.size() + W3.size() + b1.size() +
                                    b2.size() + b3.size());
}

namespace {
double* copy_out(const Eigen::MatrixXd& m, double* out) {
    std::copy(m.data(), m.data() + m.size(), out);
    return out + m.size();
}
const double* copy_in(Eigen::MatrixXd& m, const double* in) {
    std::copy(in, in + m.size(), m.data());
    return in + m.size();
}
double* copy_out(const Eigen::VectorXd& v, double* out) {
    std::copy(v.data(), v.data() + v.size(), out);
    return out + v.size();
}
const double* copy_in(Eigen::VectorXd& v, const double* in) {
    std::copy(in, in + v.size(), v.data());
    return in + v.size();
}
}  // namespace

void DenoiserNetwork::to_flat(double* out) const {
    out = copy_out(W1, out);
    out = copy_out(W2, out);
    out = copy_out(W3, out);
    out = copy_out(b1, out);
    out = copy_out(b2, out);
    copy_out(b3, out);
}

void DenoiserNetwork::from_flat(const double* in) {
    in = copy_in(W1, in);
    in = copy_in(W2, in);
    in = copy_in(W3, in);
    in = copy_in(b1, in);
    in = copy_in(b2, in);
    copy_in(b3, in);
}

void DenoiserNetwork::add_scaled(const DenoiserNetwork& other, double scale) {
    W1 += scale * other.W1;
    W2 += scale * other.W2;
    W3 += scale * other.W3;
    b1 += scale * other.b1;
    b2 += scale * other.b2;
    b3 += scale * other.b3;
}

ReparamHead ReparamHead::init(int d, std::mt19937_64& rng) {
    ReparamHead head;
    // identity-centered mu map keeps the initial latent close to x_T
    head.W_mu = Eigen::MatrixXd::Identity(d, d);
    std::normal_distribution<double> normal(0.0, 0.01);
    head.W_sigma = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) head.W_sigma(i, j) = normal(rng);
    return head;
}

std::size_t ReparamHead::param_count() const {
    return static_cast<std::size_t>(W_mu.size() + W_sigma.size());
}

void ReparamHead::to_flat(double* out) const {
    out = copy_out(W_mu, out);
    copy_out(W_sigma, out);
}

void ReparamHead::from_flat(const double* in) {
    in = copy_in(W_mu, in);
    copy_in(W_sigma, in);
}

Eigen::VectorXd forward_step(const Eigen::VectorXd& x_prev, int t,
                             const NoiseSchedule& schedule, const Eigen::VectorXd& z1) {
    if (t < 1 || t > schedule.T) throw std::out_of_range("forward_step: t out of range");
    double alpha = schedule.alphas[t - 1];
    return std::sqrt(alpha) * x_prev + std::sqrt(1.0 - alpha) * z1;
}

std::vector<Eigen::VectorXd> forward_trajectory(const Eigen::VectorXd& x0,
                                                const NoiseSchedule& schedule,
                                                std::mt19937_64& rng,
                                                std::vector<Eigen::VectorXd>* noise_log) {
    std::vector<Eigen::VectorXd> traj;
    traj.reserve(schedule.T);
    Eigen::VectorXd x = x0;
    for (int t = 1; t <= schedule.T; ++t) {
        Eigen::VectorXd z = standard_normal(static_cast<int>(x0.size()), rng);
        if (noise_log) noise_log->push_back(z);
        x = forward_step(x, t, schedule, z);
        traj.push_back(x);
    }
    return traj;
}

LatentSample reparam_sample(const Eigen::VectorXd& x_T, const ReparamHead& head,
                            const Eigen::VectorXd& z0) {
    LatentSample s;
    s.mu = head.W_mu * x_T;
    s.sigma = head.W_sigma * x_T;
    s.w = s.mu + s.sigma.cwiseProduct(z0);
    return s;
}

Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, int t, const NoiseSchedule& schedule,
                             const DenoiserNetwork& denoiser, const Eigen::VectorXd& z2,
                             double noise_scale) {
    if (t < 1 || t > schedule.T) throw std::out_of_range("reverse_step: t out of range");
    double alpha = schedule.alphas[t - 1];
    double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);
    Eigen::VectorXd predicted =
        denoiser.forward(x_t, static_cast<double>(t) / schedule.T);
    return inv_sqrt_alpha * x_t -
           (std::sqrt(1.0 - alpha) * inv_sqrt_alpha) * predicted + noise_scale * z2;
}

RegenerationResult regenerate(const Eigen::VectorXd& x0, const NoiseSchedule& schedule,
                              const ReparamHead& head, const DenoiserNetwork& denoiser,
                              std::mt19937_64& rng, double noise_scale) {
    const int d = static_cast<int>(x0.size());
    RegenerationResult result;

    Eigen::VectorXd x = x0;
    for (int t = 1; t <= schedule.T; ++t) {
        Eigen::VectorXd z1 = standard_normal(d, rng);
        result.noise_log.push_back({0, t, z1});
        x = forward_step(x, t, schedule, z1);
    }

    Eigen::VectorXd z0 = standard_normal(d, rng);
    result.noise_log.push_back({1, 0, z0});
    result.latent = reparam_sample(x, head, z0);

    for (int t = schedule.T; t >= 1; --t) {
        Eigen::VectorXd z2 = standard_normal(d, rng);
        result.noise_log.push_back({2, t, z2});
        x = reverse_step(x, t, schedule, denoiser, z2, noise_scale);
    }
    result.x_hat0 = x;
    return result;
}

DiffusionLossResult diffusion_loss(const std::vector<Eigen::VectorXd>& batch,
                                   const NoiseSchedule& schedule,
                                   const DenoiserNetwork& denoiser, std::mt19937_64& rng) {
    if (batch.empty()) throw std::invalid_argument("diffusion_loss: empty batch");
    DiffusionLossResult result;
    result.grad = DenoiserNetwork::zero(denoiser.d);
    std::uniform_int_distribution<int> t_dist(1, schedule.T);
    const double n = static_cast<double>(batch.size());

    for (const auto& x0 : batch) {
        int t = t_dist(rng);
        Eigen::VectorXd eps = standard_normal(denoiser.d, rng);
        double abar = schedule.alpha_bar(t);
        Eigen::VectorXd x_t = std::sqrt(abar) * x0 + std::sqrt(1.0 - abar) * eps;

        DenoiserNetwork::Cache cache;
        Eigen::VectorXd pred =
            denoiser.forward(x_t, static_cast<double>(t) / schedule.T, &cache);
        Eigen::VectorXd diff = pred - eps;
        result.loss += diff.squaredNorm() / n;
        denoiser.backward(cache, (2.0 / n) * diff, result.grad);
    }
    return result;
}

}  // namespace mulcanon
