#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "mulcanon/assignment.hpp"
#include "mulcanon/dataset.hpp"

namespace mulcanon {

enum class KgeKind { TransE, HolE };

struct KgeParameters {
    Eigen::MatrixXd relation_embeddings;  // RP-cluster id x d
    double margin = 1.0;                  // TransE
    KgeKind model_kind = KgeKind::TransE;

    static KgeParameters init(int n_rel_clusters, int d, KgeKind kind, double margin,
                              std::mt19937_64& rng);
};

struct KgeTriple {
    int head = -1;      // NP id
    int rel_cluster = -1;  // RP HAC-cluster id
    int tail = -1;      // NP id
};

struct TripleBatch {
    std::vector<KgeTriple> positives;
    std::vector<std::vector<KgeTriple>> negatives;  // k per positive
};

/// Posterior-weighted mixture of cluster means: sum_c v(c) mu_c.
Eigen::VectorXd entity_repr(const Eigen::VectorXd& v, const GaussianMixture& mixture);

double transe_score(const Eigen::VectorXd& h, const Eigen::VectorXd& r,
                    const Eigen::VectorXd& t);

double hole_score(const Eigen::VectorXd& h, const Eigen::VectorXd& r,
                  const Eigen::VectorXd& t);

Eigen::VectorXd circular_correlation(const Eigen::VectorXd& h, const Eigen::VectorXd& t);

/// Corrupt head or tail (coin flip) with a uniform NP; never returns the
/// positive itself (resample up to 100 tries, then accept).
std::vector<KgeTriple> sample_negatives(const KgeTriple& positive, int n_nps, int k,
                                        std::mt19937_64& rng);

struct KgeLossResult {
    double loss = 0.0;
    Eigen::MatrixXd grad_relations;         // same shape as relation embeddings
    Eigen::MatrixXd grad_means;             // k x d, into the NP mixture means
    std::vector<Eigen::VectorXd> grad_posteriors;  // aligned with `posteriors`
};

/// Margin hinge for TransE, logistic for HolE; entity vectors are built from
/// the supplied posteriors via entity_repr. `posteriors` is indexed by NP id.
KgeLossResult kge_loss(const TripleBatch& batch,
                       const std::vector<Eigen::VectorXd>& posteriors,
                       const GaussianMixture& mixture, const KgeParameters& params);

}  // namespace mulcanon
