#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mulcanon {

enum class Linkage { Complete, Average, Single };
enum class HacDistance { Cosine, Euclidean };
enum class CenterRule { Centroid, Medoid };

struct InitialClustering {
    std::vector<int> labels;               // phrase id -> cluster id
    std::vector<std::vector<int>> clusters;  // cluster id -> sorted member ids
    int k = 0;
};

struct MixtureSeed {
    Eigen::MatrixXd means;      // k x d
    Eigen::MatrixXd variances;  // k x d, floored
    Eigen::VectorXd priors;     // k, sums to 1
};

inline constexpr double kVarianceFloor = 1e-4;

double pairwise_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         HacDistance distance);

/// Agglomerative merge until the minimum inter-cluster distance exceeds the
/// threshold. Linkage updates use the Lance-Williams recurrences; ties are
/// broken by the lowest (cluster-id, cluster-id) pair. Final cluster ids are
/// dense 0..k-1, ordered by smallest member id. Zero-norm vectors under
/// cosine distance sit at distance 1 from everything.
InitialClustering hac_cluster(const std::vector<Eigen::VectorXd>& points,
                              Linkage linkage, HacDistance distance, double threshold);

MixtureSeed seed_mixture(const InitialClustering& clustering,
                         const std::vector<Eigen::VectorXd>& points,
                         CenterRule center = CenterRule::Centroid,
                         HacDistance medoid_distance = HacDistance::Euclidean);

/// One-hot weak-supervision target for a phrase.
Eigen::VectorXd weak_label(const InitialClustering& clustering, int phrase_id);

void dump_clustering(const InitialClustering& clustering, const std::string& path);

}  // namespace mulcanon
