#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace mulcanon {

struct NoiseSchedule {
    int T = 0;
    Eigen::VectorXd betas;   // beta_1..beta_T
    Eigen::VectorXd alphas;  // alpha_t = 1 - beta_t

    static NoiseSchedule linear(int T, double beta_start = 1e-4, double beta_end = 0.02);
    // Degenerate betas (0) are permitted only for tests.
    static NoiseSchedule custom(const Eigen::VectorXd& betas, bool allow_degenerate = false);

    /// Cumulative product alpha_bar_t = prod_{s<=t} alpha_s.
    double alpha_bar(int t) const;
};

/// Equidimensional MLP noise predictor f(x_t, t). The timestep enters as a
/// scalar t/T appended to the input; two tanh hidden layers of width 2d.
struct DenoiserNetwork {
    int d = 0;
    Eigen::MatrixXd W1, W2, W3;
    Eigen::VectorXd b1, b2, b3;

    static DenoiserNetwork init(int d, std::mt19937_64& rng);
    static DenoiserNetwork zero(int d);

    struct Cache {
        Eigen::VectorXd in, h1, h2, out;
    };

    Eigen::VectorXd forward(const Eigen::VectorXd& x, double t_frac,
                            Cache* cache = nullptr) const;
    /// Accumulates parameter gradients into `grad` and returns dL/dx
    /// (excluding the appended timestep component).
    Eigen::VectorXd backward(const Cache& cache, const Eigen::VectorXd& dout,
                             DenoiserNetwork& grad) const;

    std::size_t param_count() const;
    void to_flat(double* out) const;
    void from_flat(const double* in);
    void add_scaled(const DenoiserNetwork& other, double scale);
};

struct ReparamHead {
    Eigen::MatrixXd W_mu, W_sigma;  // d x d

    static ReparamHead init(int d, std::mt19937_64& rng);
    std::size_t param_count() const;
    void to_flat(double* out) const;
    void from_flat(const double* in);
};

struct LatentSample {
    Eigen::VectorXd w, mu, sigma;
};

Eigen::VectorXd forward_step(const Eigen::VectorXd& x_prev, int t,
                             const NoiseSchedule& schedule, const Eigen::VectorXd& z1);

std::vector<Eigen::VectorXd> forward_trajectory(const Eigen::VectorXd& x0,
                                                const NoiseSchedule& schedule,
                                                std::mt19937_64& rng,
                                                std::vector<Eigen::VectorXd>* noise_log = nullptr);

LatentSample reparam_sample(const Eigen::VectorXd& x_T, const ReparamHead& head,
                            const Eigen::VectorXd& z0);

Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, int t, const NoiseSchedule& schedule,
                             const DenoiserNetwork& denoiser, const Eigen::VectorXd& z2,
                             double noise_scale);

struct RegenerationResult {
    Eigen::VectorXd x_hat0;
    LatentSample latent;  // evaluated at x_T, recorded for reporting
    // replayable noise log: (stage, step, draw); stage 0=forward, 1=reparam, 2=reverse
    struct NoiseRecord {
        int stage;
        int step;
        Eigen::VectorXd draw;
    };
    std::vector<NoiseRecord> noise_log;
};

RegenerationResult regenerate(const Eigen::VectorXd& x0, const NoiseSchedule& schedule,
                              const ReparamHead& head, const DenoiserNetwork& denoiser,
                              std::mt19937_64& rng, double noise_scale);

struct DiffusionLossResult {
    double loss = 0.0;
    DenoiserNetwork grad;  // same shapes as the network, holds dL/dtau
};

/// Noise-regression loss: one uniformly drawn timestep and standard-normal
/// draw per sample, with x_t built from the closed-form forward relation.
DiffusionLossResult diffusion_loss(const std::vector<Eigen::VectorXd>& batch,
                                   const NoiseSchedule& schedule,
                                   const DenoiserNetwork& denoiser, std::mt19937_64& rng);

Eigen::VectorXd standard_normal(int d, std::mt19937_64& rng);

}  // namespace mulcanon
