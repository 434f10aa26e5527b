#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mulcanon/assignment.hpp"
#include "mulcanon/optim.hpp"

using namespace mulcanon;

namespace {

GaussianMixture random_mixture(int k, int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    GaussianMixture gm;
    gm.k = k;
    gm.d = d;
    gm.means = Eigen::MatrixXd::NullaryExpr(k, d, [&] { return gauss(rng); });
    gm.var_raw = Eigen::MatrixXd::NullaryExpr(k, d, [&] { return gauss(rng) * 0.5; });
    gm.prior_logits = Eigen::VectorXd::NullaryExpr(k, [&] { return gauss(rng); });
    return gm;
}

GaussianMixture simple_mixture(const Eigen::MatrixXd& means,
                               const Eigen::MatrixXd& variances,
                               const Eigen::VectorXd& priors) {
    MixtureSeed seed;
    seed.means = means;
    seed.variances = variances;
    seed.priors = priors;
    return GaussianMixture::from_seed(seed);
}

}  // namespace

TEST_CASE("from_seed reproduces seed statistics through the parametrization") {
    Eigen::MatrixXd means(2, 2);
    means << 0, 0, 3, 3;
    Eigen::MatrixXd variances(2, 2);
    variances << 0.5, 1.5, kVarianceFloor, 2.0;
    Eigen::Vector2d priors(0.75, 0.25);
    GaussianMixture gm = simple_mixture(means, variances, priors);

    CHECK((gm.variances() - variances).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((gm.priors() - priors).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(gm.priors().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric two-cluster posterior is exactly half-half") {
    Eigen::MatrixXd means(2, 1);
    means << -1, 1;
    Eigen::MatrixXd variances = Eigen::MatrixXd::Ones(2, 1);
    Eigen::Vector2d priors(0.5, 0.5);
    GaussianMixture gm = simple_mixture(means, variances, priors);

    Eigen::VectorXd w(1);
    w << 0.0;
    Eigen::VectorXd v = posterior(w, gm);
    CHECK(v(0) == 0.5);
    CHECK(v(1) == 0.5);
}

TEST_CASE("1-D analytic case: 1/(1+e^-2)") {
    Eigen::MatrixXd means(2, 1);
    means << 0, 2;
    Eigen::MatrixXd variances = Eigen::MatrixXd::Ones(2, 1);
    Eigen::Vector2d priors(0.5, 0.5);
    GaussianMixture gm = simple_mixture(means, variances, priors);

    Eigen::VectorXd w(1);
    w << 0.0;
    Eigen::VectorXd v = posterior(w, gm);
    CHECK(v(0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-9));
}

TEST_CASE("posteriors sum to one on random mixtures") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        GaussianMixture gm = random_mixture(2 + trial % 5, 3, rng);
        Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(3, [&] { return gauss(rng); });
        Eigen::VectorXd v = posterior(w, gm);
        CHECK(std::abs(v.sum() - 1.0) < 1e-12);
        CHECK(v.minCoeff() >= 0.0);
    }
}

TEST_CASE("posterior is robust to large log-density offsets") {
    // shifting w far from all means scales all unnormalized densities down
    // together; log-sum-exp keeps the ratio intact
    Eigen::MatrixXd means(2, 1);
    means << 0, 2;
    Eigen::MatrixXd variances = Eigen::MatrixXd::Ones(2, 1);
    Eigen::Vector2d priors(0.5, 0.5);
    GaussianMixture gm = simple_mixture(means, variances, priors);
    Eigen::VectorXd far(1);
    far << 200.0;
    Eigen::VectorXd v = posterior(far, gm);
    CHECK(std::abs(v.sum() - 1.0) < 1e-12);
    CHECK(v(1) > v(0));  // closer to mean 2
}

TEST_CASE("clustering loss on matched and uniform posteriors") {
    // two well-separated clusters; a latent at a mean scores ~0 loss against
    // its own label, and ln 2 when the posterior is symmetric
    Eigen::MatrixXd means(2, 1);
    means << -30, 30;
    Eigen::MatrixXd variances = Eigen::MatrixXd::Ones(2, 1);
    Eigen::Vector2d priors(0.5, 0.5);
    GaussianMixture gm = simple_mixture(means, variances, priors);

    std::vector<Eigen::VectorXd> latents{(Eigen::VectorXd(1) << -30.0).finished()};
    std::vector<int> targets{0};
    CHECK(clustering_loss(latents, targets, gm).loss == doctest::Approx(0.0).epsilon(1e-9));

    latents[0](0) = 0.0;  // equidistant -> v = [0.5, 0.5]
    CHECK(clustering_loss(latents, targets, gm).loss ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("collapsed posterior against a disagreeing weak label is clamped") {
    Eigen::MatrixXd means(2, 1);
    means << 0, 1000;
    Eigen::MatrixXd variances =
        Eigen::MatrixXd::Constant(2, 1, kVarianceFloor);
    Eigen::Vector2d priors(0.5, 0.5);
    GaussianMixture gm = simple_mixture(means, variances, priors);

    std::vector<Eigen::VectorXd> latents{(Eigen::VectorXd(1) << 0.0).finished()};
    std::vector<int> targets{1};  // label says the far cluster
    ClusteringLossResult res = clustering_loss(latents, targets, gm);
    CHECK(res.clamped_logs == 1);
    CHECK(std::isfinite(res.loss));
    CHECK(res.loss > 0.0);
}

TEST_CASE("clustering loss gradient matches finite differences") {
    std::mt19937_64 rng(67);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int k = 3, d = 2, n = 4;
        GaussianMixture gm = random_mixture(k, d, rng);
        std::vector<Eigen::VectorXd> latents;
        std::vector<int> targets;
        std::uniform_int_distribution<int> tdist(0, k - 1);
        for (int i = 0; i < n; ++i) {
            latents.push_back(Eigen::VectorXd::NullaryExpr(d, [&] { return gauss(rng); }));
            targets.push_back(tdist(rng));
        }

        // flat parameter layout: mixture params then all latents
        std::size_t np = gm.param_count();
        std::vector<double> point(np + n * d);
        gm.to_flat(point.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) point[np + i * d + j] = latents[i](j);

        auto f = [&](const std::vector<double>& params) {
            GaussianMixture candidate = gm;
            candidate.from_flat(params.data());
            std::vector<Eigen::VectorXd> ls(n, Eigen::VectorXd(d));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) ls[i](j) = params[np + i * d + j];
            return clustering_loss(ls, targets, candidate).loss;
        };

        ClusteringLossResult res = clustering_loss(latents, targets, gm);
        std::vector<double> analytic(np + n * d);
        res.grad_mixture.to_flat(analytic.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) analytic[np + i * d + j] = res.grad_w[i](j);

        CHECK(grad_check(f, point, analytic, 1e-6) <= 1e-4);
    }
}

TEST_CASE("posterior_backward consistency via finite differences on w") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> gauss(0.0, 1.0);
    GaussianMixture gm = random_mixture(4, 3, rng);
    Eigen::VectorXd w = Eigen::VectorXd::NullaryExpr(3, [&] { return gauss(rng); });
    Eigen::VectorXd dv = Eigen::VectorXd::NullaryExpr(4, [&] { return gauss(rng); });

    PosteriorCache cache;
    posterior(w, gm, &cache);
    GaussianMixtureGrad grad = GaussianMixtureGrad::zero(gm);
    Eigen::VectorXd dw = posterior_backward(w, gm, cache, dv, grad);

    std::vector<double> point(3), analytic(3);
    for (int j = 0; j < 3; ++j) {
        point[j] = w(j);
        analytic[j] = dw(j);
    }
    auto f = [&](const std::vector<double>& params) {
        Eigen::VectorXd wc(3);
        for (int j = 0; j < 3; ++j) wc(j) = params[j];
        return posterior(wc, gm).dot(dv);
    };
    CHECK(grad_check(f, point, analytic, 1e-6) <= 1e-4);
}

TEST_CASE("hard_assign argmax with lowest-id tie break") {
    CHECK(hard_assign((Eigen::VectorXd(3) << 0.1, 0.7, 0.2).finished()) == 1);
    CHECK(hard_assign((Eigen::VectorXd(2) << 0.5, 0.5).finished()) == 0);
    // matches a linear-scan oracle on random simplex vectors
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(5, [&] { return unif(rng); });
        v /= v.sum();
        int best = 0;
        for (int i = 1; i < 5; ++i)
            if (v(i) > v(best)) best = i;
        CHECK(hard_assign(v) == best);
    }
}

TEST_CASE("mixture flat round-trip preserves posteriors") {
    std::mt19937_64 rng(79);
    GaussianMixture gm = random_mixture(3, 2, rng);
    std::vector<double> flat(gm.param_count());
    gm.to_flat(flat.data());
    GaussianMixture copy = gm;
    copy.means.setZero();
    copy.from_flat(flat.data());
    Eigen::Vector2d w(0.3, -0.4);
    CHECK((posterior(w, gm) - posterior(w, copy)).norm() == 0.0);
}
