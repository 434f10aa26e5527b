#include "mulcanon/hac.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mulcanon {

double pairwise_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         HacDistance distance) {
    if (distance == HacDistance::Euclidean) return (a - b).norm();
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 1.0;  // zero-norm convention
    double cos = a.dot(b) / (na * nb);
    cos = std::clamp(cos, -1.0, 1.0);
    return 1.0 - cos;
}

InitialClustering hac_cluster(const std::vector<Eigen::VectorXd>& points,
                              Linkage linkage, HacDistance distance, double threshold) {
    const int n = static_cast<int>(points.size());
    if (n == 0) throw std::invalid_argument("hac_cluster: no points");
    if (!(threshold > 0.0)) throw std::invalid_argument("hac_cluster: threshold must be > 0");

    // dist[i][j] between active clusters i < j, updated by Lance-Williams
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = pairwise_distance(points[i], points[j], distance);

    std::vector<bool> active(n, true);
    std::vector<int> size(n, 1);
    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) members[i] = {i};

    int n_active = n;
    while (n_active > 1) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (dist[i][j] < best) {
                    best = dist[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best > threshold) break;
        // merge bj into bi; update distances to all other active clusters
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            double dik = dist[std::min(bi, k)][std::max(bi, k)];
            double djk = dist[std::min(bj, k)][std::max(bj, k)];
            double merged;
            switch (linkage) {
                case Linkage::Complete: merged = std::max(dik, djk); break;
                case Linkage::Single: merged = std::min(dik, djk); break;
                case Linkage::Average:
                    merged = (size[bi] * dik + size[bj] * djk) /
                             static_cast<double>(size[bi] + size[bj]);
                    break;
                default: throw std::logic_error("unknown linkage");
            }
            dist[std::min(bi, k)][std::max(bi, k)] = merged;
        }
        members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
        members[bj].clear();
        size[bi] += size[bj];
        active[bj] = false;
        --n_active;
    }

    InitialClustering out;
    out.labels.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!active[i]) continue;
        std::sort(members[i].begin(), members[i].end());
        out.clusters.push_back(members[i]);
    }
    // active cluster ids equal their smallest member, so iteration order above
    // already yields clusters sorted by smallest member id
    out.k = static_cast<int>(out.clusters.size());
    for (int c = 0; c < out.k; ++c)
        for (int m : out.clusters[c]) out.labels[m] = c;
    return out;
}

MixtureSeed seed_mixture(const InitialClustering& clustering,
                         const std::vector<Eigen::VectorXd>& points,
                         CenterRule center, HacDistance medoid_distance) {
    if (points.empty()) throw std::invalid_argument("seed_mixture: no points");
    const int k = clustering.k;
    const int d = static_cast<int>(points[0].size());
    MixtureSeed seed;
    seed.means.resize(k, d);
    seed.variances.resize(k, d);
    seed.priors.resize(k);

    const double total = static_cast<double>(points.size());
    for (int c = 0; c < k; ++c) {
        const auto& mem = clustering.clusters[c];
        if (mem.empty()) throw std::logic_error("empty cluster in seed_mixture");
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int m : mem) centroid += points[m];
        centroid /= static_cast<double>(mem.size());

        Eigen::VectorXd mu = centroid;
        if (center == CenterRule::Medoid) {
            double best = std::numeric_limits<double>::infinity();
            int best_m = mem.front();
            for (int m : mem) {
                double s = 0.0;
                for (int o : mem) s += pairwise_distance(points[m], points[o], medoid_distance);
                if (s < best) {
                    best = s;
                    best_m = m;
                }
            }
            mu = points[best_m];
        }

        Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
        for (int m : mem) var += (points[m] - mu).cwiseAbs2();
        var /= static_cast<double>(mem.size());
        var = var.cwiseMax(kVarianceFloor);

        seed.means.row(c) = mu.transpose();
        seed.variances.row(c) = var.transpose();
        seed.priors[c] = static_cast<double>(mem.size()) / total;
    }
    return seed;
}

Eigen::VectorXd weak_label(const InitialClustering& clustering, int phrase_id) {
    Eigen::VectorXd one_hot = Eigen::VectorXd::Zero(clustering.k);
    one_hot[clustering.labels.at(phrase_id)] = 1.0;
    return one_hot;
}

void dump_clustering(const InitialClustering& clustering, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open clustering dump: " + path);
    for (std::size_t i = 0; i < clustering.labels.size(); ++i)
        out << i << '\t' << clustering.labels[i] << '\n';
}

}  // namespace mulcanon
