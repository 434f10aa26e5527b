#include "mulcanon/synth.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <random>
#include <stdexcept>
#include <vector>

namespace mulcanon {

void generate_synthetic(const SynthParams& params, const std::string& triples_path,
                        const std::string& vectors_path) {
    if (params.entities < 2 || params.aliases_per_entity < 1 || params.relations < 1 ||
        params.triples < 1 || params.dim < 1)
        throw std::invalid_argument("synthetic generator: bad parameters");

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](int d) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = normal(rng);
        return v;
    };

    // the centroid signal lives in the leading coordinates and the per-alias
    // jitter in the trailing ones, so the planted structure is recoverable by
    // a linear projection (anisotropic Gaussian noise)
    const int signal_dims = (params.dim + 1) / 2;
    std::vector<Eigen::VectorXd> centroids(params.entities);
    for (auto& c : centroids) {
        c = draw(params.dim);
        c.tail(params.dim - signal_dims).setZero();
    }

    // phrase mean of {entity token, alias token} must equal centroid + noise,
    // so the alias token vector completes the average
    std::vector<std::vector<Eigen::VectorXd>> alias_token_vecs(params.entities);
    for (int i = 0; i < params.entities; ++i) {
        alias_token_vecs[i].resize(params.aliases_per_entity);
        for (int j = 0; j < params.aliases_per_entity; ++j) {
            Eigen::VectorXd jitter = params.noise * draw(params.dim);
            jitter.head(signal_dims).setZero();
            Eigen::VectorXd target = centroids[i] + jitter;
            alias_token_vecs[i][j] = 2.0 * target - centroids[i];
        }
    }

    std::vector<Eigen::VectorXd> relation_vecs(params.relations);
    for (auto& r : relation_vecs) r = draw(params.dim);

    auto alias_surface = [](int i, int j) {
        return "e" + std::to_string(i) + " u" + std::to_string(i) + "x" + std::to_string(j);
    };

    {
        std::ofstream out(triples_path);
        if (!out) throw std::runtime_error("cannot open triples output: " + triples_path);
        std::uniform_int_distribution<int> ent(0, params.entities - 1);
        std::uniform_int_distribution<int> alias(0, params.aliases_per_entity - 1);
        std::uniform_int_distribution<int> rel(0, params.relations - 1);
        for (int t = 0; t < params.triples; ++t) {
            int h = ent(rng);
            int tl = ent(rng);
            while (tl == h) tl = ent(rng);
            int m = rel(rng);
            out << t << '\t' << alias_surface(h, alias(rng)) << '\t' << "r" << m << '\t'
                << alias_surface(tl, alias(rng)) << '\t' << "g" << h << '\t' << "g" << tl
                << '\n';
        }
    }

    {
        std::ofstream out(vectors_path);
        if (!out) throw std::runtime_error("cannot open vectors output: " + vectors_path);
        out.precision(17);
        auto write_vec = [&out](const std::string& token, const Eigen::VectorXd& v) {
            out << token;
            for (int i = 0; i < v.size(); ++i) out << ' ' << v[i];
            out << '\n';
        };
        for (int i = 0; i < params.entities; ++i) {
            write_vec("e" + std::to_string(i), centroids[i]);
            for (int j = 0; j < params.aliases_per_entity; ++j)
                write_vec("u" + std::to_string(i) + "x" + std::to_string(j),
                          alias_token_vecs[i][j]);
        }
        for (int m = 0; m < params.relations; ++m)
            write_vec("r" + std::to_string(m), relation_vecs[m]);
    }
}

}  // namespace mulcanon
