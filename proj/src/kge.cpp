#include "mulcanon/kge.hpp"

#include <cmath>
#include <stdexcept>

namespace mulcanon {

KgeParameters KgeParameters::init(int n_rel_clusters, int d, KgeKind kind, double margin,
                                  std::mt19937_64& rng) {
    if (margin <= 0.0) throw std::invalid_argument("margin must be positive");
    KgeParameters p;
    p.margin = margin;
    p.model_kind = kind;
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    p.relation_embeddings.resize(n_rel_clusters, d);
    for (int i = 0; i < n_rel_clusters; ++i)
        for (int j = 0; j < d; ++j) p.relation_embeddings(i, j) = normal(rng);
    return p;
}

Eigen::VectorXd entity_repr(const Eigen::VectorXd& v, const GaussianMixture& mixture) {
    if (v.size() != mixture.k) throw std::invalid_argument("entity_repr: posterior size mismatch");
    return mixture.means.transpose() * v;
}

double transe_score(const Eigen::VectorXd& h, const Eigen::VectorXd& r,
                    const Eigen::VectorXd& t) {
    return -(h + r - t).norm();
}

Eigen::VectorXd circular_correlation(const Eigen::VectorXd& h, const Eigen::VectorXd& t) {
    const int d = static_cast<int>(h.size());
    Eigen::VectorXd cc = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) cc[i] += h[j] * t[(j + i) % d];
    return cc;
}

double hole_score(const Eigen::VectorXd& h, const Eigen::VectorXd& r,
                  const Eigen::VectorXd& t) {
    return r.dot(circular_correlation(h, t));
}

std::vector<KgeTriple> sample_negatives(const KgeTriple& positive, int n_nps, int k,
                                        std::mt19937_64& rng) {
    if (k < 1) throw std::invalid_argument("sample_negatives: k must be >= 1");
    if (n_nps < 2) throw std::invalid_argument("sample_negatives: need at least 2 NPs");
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> np_dist(0, n_nps - 1);
    std::vector<KgeTriple> negatives;
    negatives.reserve(k);
    for (int i = 0; i < k; ++i) {
        KgeTriple neg = positive;
        for (int attempt = 0; attempt < 100; ++attempt) {
            neg = positive;
            if (coin(rng) == 0)
                neg.head = np_dist(rng);
            else
                neg.tail = np_dist(rng);
            if (neg.head != positive.head || neg.tail != positive.tail) break;
        }
        negatives.push_back(neg);
    }
    return negatives;
}

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct ScoreGrad {
    Eigen::VectorXd dh, dr, dt;
};

double score_with_grad(const Eigen::VectorXd& h, const Eigen::VectorXd& r,
                       const Eigen::VectorXd& t, KgeKind kind, ScoreGrad& g) {
    const int d = static_cast<int>(h.size());
    if (kind == KgeKind::TransE) {
        Eigen::VectorXd diff = h + r - t;
        double norm = diff.norm();
        Eigen::VectorXd u =
            norm > 0.0 ? Eigen::VectorXd(diff / norm) : Eigen::VectorXd(Eigen::VectorXd::Zero(d));
        g.dh = -u;
        g.dr = -u;
        g.dt = u;
        return -norm;
    }
    // HolE
    Eigen::VectorXd cc = circular_correlation(h, t);
    g.dr = cc;
    g.dh = Eigen::VectorXd::Zero(d);
    g.dt = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g.dh[j] += r[i] * t[(j + i) % d];
    for (int m = 0; m < d; ++m)
        for (int j = 0; j < d; ++j) g.dt[m] += h[j] * r[((m - j) % d + d) % d];
    return r.dot(cc);
}

}  // namespace

KgeLossResult kge_loss(const TripleBatch& batch,
                       const std::vector<Eigen::VectorXd>& posteriors,
                       const GaussianMixture& mixture, const KgeParameters& params) {
    if (batch.positives.empty()) throw std::invalid_argument("kge_loss: empty batch");
    if (batch.negatives.size() != batch.positives.size())
        throw std::invalid_argument("kge_loss: negatives not aligned with positives");

    KgeLossResult result;
    result.grad_relations = Eigen::MatrixXd::Zero(params.relation_embeddings.rows(),
                                                  params.relation_embeddings.cols());
    result.grad_means = Eigen::MatrixXd::Zero(mixture.k, mixture.d);
    result.grad_posteriors.assign(posteriors.size(),
                                  Eigen::VectorXd::Zero(mixture.k));

    std::size_t n_pairs = 0;
    for (const auto& negs : batch.negatives) n_pairs += negs.size();
    if (n_pairs == 0) throw std::invalid_argument("kge_loss: no negative samples");
    const double inv_n = 1.0 / static_cast<double>(n_pairs);

    auto entity = [&](int np_id) { return entity_repr(posteriors.at(np_id), mixture); };
    auto accumulate = [&](const KgeTriple& t, const ScoreGrad& g, double scale) {
        const Eigen::VectorXd& vh = posteriors.at(t.head);
        const Eigen::VectorXd& vt = posteriors.at(t.tail);
        result.grad_relations.row(t.rel_cluster) += scale * g.dr.transpose();
        for (int c = 0; c < mixture.k; ++c) {
            result.grad_means.row(c) +=
                scale * (vh[c] * g.dh.transpose() + vt[c] * g.dt.transpose());
        }
        result.grad_posteriors[t.head] += scale * (mixture.means * g.dh);
        result.grad_posteriors[t.tail] += scale * (mixture.means * g.dt);
    };

    for (std::size_t i = 0; i < batch.positives.size(); ++i) {
        const KgeTriple& pos = batch.positives[i];
        Eigen::VectorXd eh = entity(pos.head);
        Eigen::VectorXd et = entity(pos.tail);
        Eigen::VectorXd r = params.relation_embeddings.row(pos.rel_cluster).transpose();
        ScoreGrad g_pos;
        double s_pos = score_with_grad(eh, r, et, params.model_kind, g_pos);

        for (const KgeTriple& neg : batch.negatives[i]) {
            Eigen::VectorXd neh = entity(neg.head);
            Eigen::VectorXd net = entity(neg.tail);
            Eigen::VectorXd nr = params.relation_embeddings.row(neg.rel_cluster).transpose();
            ScoreGrad g_neg;
            double s_neg = score_with_grad(neh, nr, net, params.model_kind, g_neg);

            if (params.model_kind == KgeKind::TransE) {
                double hinge = params.margin - s_pos + s_neg;
                if (hinge > 0.0) {
                    result.loss += hinge * inv_n;
                    accumulate(pos, g_pos, -inv_n);
                    accumulate(neg, g_neg, inv_n);
                }
            } else {
                double sp = logistic(s_pos);
                double sn = logistic(-s_neg);
                result.loss += (-std::log(sp) - std::log(sn)) * inv_n;
                accumulate(pos, g_pos, -(1.0 - sp) * inv_n);
                accumulate(neg, g_neg, (1.0 - sn) * inv_n);
            }
        }
    }
    return result;
}

}  // namespace mulcanon
