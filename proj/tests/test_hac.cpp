#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "mulcanon/hac.hpp"

using namespace mulcanon;

namespace {

// Independent O(n^3) agglomerative reference that recomputes every linkage
// distance from scratch from the member lists (no Lance-Williams updates).
std::vector<std::vector<int>> brute_force_hac(const std::vector<Eigen::VectorXd>& points,
                                              Linkage linkage, HacDistance distance,
                                              double threshold) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < (int)points.size(); ++i) clusters.push_back({i});

    auto link = [&](const std::vector<int>& a, const std::vector<int>& b) {
        double best = linkage == Linkage::Single ? 1e300
                      : linkage == Linkage::Complete ? -1e300 : 0.0;
        double sum = 0.0;
        for (int i : a)
            for (int j : b) {
                double d = pairwise_distance(points[i], points[j], distance);
                sum += d;
                best = linkage == Linkage::Single ? std::min(best, d) : std::max(best, d);
            }
        if (linkage == Linkage::Average) return sum / ((double)a.size() * (double)b.size());
        return best;
    };

    while (clusters.size() > 1) {
        double best = 1e300;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double d = link(clusters[i], clusters[j]);
                if (d < best - 1e-12) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        if (best > threshold) break;
        for (int m : clusters[bj]) clusters[bi].push_back(m);
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + bj);
    }
    // canonical order: by smallest member
    for (auto& c : clusters) std::sort(c.begin(), c.end());
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

std::vector<Eigen::VectorXd> two_blobs(int n_per, double sep, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 0.2);
    std::vector<Eigen::VectorXd> points;
    for (int blob = 0; blob < 2; ++blob)
        for (int i = 0; i < n_per; ++i) {
            Eigen::VectorXd p(3);
            p << blob * sep + gauss(rng), gauss(rng) + 1.0, gauss(rng);
            points.push_back(p);
        }
    return points;
}

}  // namespace

TEST_CASE("pairwise cosine distance basics") {
    Eigen::Vector2d e1(1, 0), e2(0, 1);
    CHECK(pairwise_distance(e1, e1, HacDistance::Cosine) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pairwise_distance(e1, e2, HacDistance::Cosine) == doctest::Approx(1.0).epsilon(1e-15));
    // zero-norm convention: distance 1 to everything
    Eigen::Vector2d zero(0, 0);
    CHECK(pairwise_distance(zero, e1, HacDistance::Cosine) == 1.0);
    CHECK(pairwise_distance(zero, zero, HacDistance::Cosine) == 1.0);
    CHECK(pairwise_distance(e1, e2, HacDistance::Euclidean) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("identical vectors merge into one cluster") {
    std::vector<Eigen::VectorXd> points{Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1)};
    auto c = hac_cluster(points, Linkage::Complete, HacDistance::Cosine, 0.1);
    CHECK(c.k == 1);
    CHECK(c.clusters[0] == std::vector<int>{0, 1});
}

TEST_CASE("orthogonal vectors stay singletons below the threshold") {
    std::vector<Eigen::VectorXd> points{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    auto c = hac_cluster(points, Linkage::Complete, HacDistance::Cosine, 0.5);
    CHECK(c.k == 2);  // cosine distance 1 > 0.5
}

TEST_CASE("threshold extremes: one cluster vs all singletons") {
    std::mt19937_64 rng(3);
    auto points = two_blobs(5, 4.0, rng);
    auto everything = hac_cluster(points, Linkage::Average, HacDistance::Euclidean, 1e9);
    CHECK(everything.k == 1);
    auto nothing = hac_cluster(points, Linkage::Average, HacDistance::Euclidean, 1e-12);
    CHECK(nothing.k == (int)points.size());
}

TEST_CASE("output is a partition with dense cluster ids") {
    std::mt19937_64 rng(5);
    auto points = two_blobs(7, 3.0, rng);
    auto c = hac_cluster(points, Linkage::Complete, HacDistance::Cosine, 0.3);
    std::vector<int> seen(points.size(), 0);
    for (int id = 0; id < c.k; ++id)
        for (int m : c.clusters[id]) {
            ++seen[m];
            CHECK(c.labels[m] == id);
        }
    for (int s : seen) CHECK(s == 1);
    // ids ordered by smallest member
    for (int id = 1; id < c.k; ++id)
        CHECK(c.clusters[id - 1].front() < c.clusters[id].front());
}

TEST_CASE("matches the brute-force linkage oracle") {
    std::mt19937_64 rng(11);
    for (Linkage linkage : {Linkage::Complete, Linkage::Average, Linkage::Single})
        for (HacDistance distance : {HacDistance::Cosine, HacDistance::Euclidean})
            for (int trial = 0; trial < 10; ++trial) {
                auto points = two_blobs(10, 2.5, rng);
                double threshold = distance == HacDistance::Cosine ? 0.4 : 1.5;
                auto fast = hac_cluster(points, linkage, distance, threshold);
                auto slow = brute_force_hac(points, linkage, distance, threshold);
                REQUIRE(fast.k == (int)slow.size());
                for (int id = 0; id < fast.k; ++id) CHECK(fast.clusters[id] == slow[id]);
            }
}

TEST_CASE("well-separated blobs are recovered") {
    std::mt19937_64 rng(17);
    auto points = two_blobs(10, 10.0, rng);
    auto c = hac_cluster(points, Linkage::Complete, HacDistance::Euclidean, 2.0);
    REQUIRE(c.k == 2);
    for (int i = 0; i < 10; ++i) CHECK(c.labels[i] == c.labels[0]);
    for (int i = 10; i < 20; ++i) CHECK(c.labels[i] == c.labels[10]);
}

TEST_CASE("seed_mixture statistics and floor") {
    std::vector<Eigen::VectorXd> points{
        Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), Eigen::Vector2d(4, 0),
        Eigen::Vector2d(10, 10)};
    InitialClustering c;
    c.labels = {0, 0, 0, 1};
    c.clusters = {{0, 1, 2}, {3}};
    c.k = 2;
    MixtureSeed seed = seed_mixture(c, points);

    // sizes 3 and 1 -> priors [0.75, 0.25]
    CHECK(seed.priors(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(seed.priors(1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(seed.priors.sum() == doctest::Approx(1.0).epsilon(1e-12));

    // centroid of cluster 0 = [2, 0]; population variance of {0,2,4} = 8/3
    CHECK(seed.means(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(seed.variances(0, 0) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    // dim with zero spread hits the floor
    CHECK(seed.variances(0, 1) == kVarianceFloor);
    // singleton cluster: mean is the point, variance floored everywhere
    CHECK(seed.means(1, 0) == 10.0);
    CHECK(seed.variances(1, 0) == kVarianceFloor);
    CHECK(seed.variances(1, 1) == kVarianceFloor);
}

TEST_CASE("seed_mixture matches direct per-cluster statistics on random labelings") {
    std::mt19937_64 rng(23);
    auto points = two_blobs(8, 1.0, rng);
    InitialClustering c;
    c.k = 2;
    c.labels.resize(points.size());
    c.clusters.assign(2, {});
    std::uniform_int_distribution<int> coin(0, 1);
    c.labels[0] = 0;
    c.labels[1] = 1;  // keep both clusters non-empty
    for (std::size_t i = 2; i < points.size(); ++i) c.labels[i] = coin(rng);
    for (std::size_t i = 0; i < points.size(); ++i) c.clusters[c.labels[i]].push_back((int)i);

    MixtureSeed seed = seed_mixture(c, points);
    for (int id = 0; id < 2; ++id) {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
        for (int m : c.clusters[id]) mean += points[m];
        mean /= (double)c.clusters[id].size();
        CHECK((seed.means.row(id).transpose() - mean).norm() < 1e-12);
        Eigen::VectorXd var = Eigen::VectorXd::Zero(3);
        for (int m : c.clusters[id]) var += (points[m] - mean).array().square().matrix();
        var /= (double)c.clusters[id].size();
        for (int j = 0; j < 3; ++j)
            CHECK(seed.variances(id, j) ==
                  doctest::Approx(std::max(var(j), kVarianceFloor)).epsilon(1e-12));
    }
}

TEST_CASE("weak labels are one-hot and consistent with labels") {
    InitialClustering c;
    c.k = 4;
    c.labels = {2, 0};
    c.clusters = {{1}, {}, {0}, {}};
    Eigen::VectorXd label = weak_label(c, 0);
    REQUIRE(label.size() == 4);
    CHECK(label(2) == 1.0);
    CHECK(label.sum() == 1.0);
    CHECK(weak_label(c, 1)(0) == 1.0);
}

TEST_CASE("k=1 weak labels are all [1]") {
    InitialClustering c;
    c.k = 1;
    c.labels = {0, 0, 0};
    c.clusters = {{0, 1, 2}};
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd label = weak_label(c, i);
        REQUIRE(label.size() == 1);
        CHECK(label(0) == 1.0);
    }
}

TEST_CASE("medoid center rule picks an actual member") {
    std::vector<Eigen::VectorXd> points{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                                        Eigen::Vector2d(5, 0)};
    InitialClustering c;
    c.k = 1;
    c.labels = {0, 0, 0};
    c.clusters = {{0, 1, 2}};
    MixtureSeed seed = seed_mixture(c, points, CenterRule::Medoid);
    // medoid of {0,1,5} on the line is 1
    CHECK(seed.means(0, 0) == 1.0);
}
