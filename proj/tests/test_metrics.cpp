#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "mulcanon/metrics.hpp"

using namespace mulcanon;

namespace {

Clustering make(std::vector<std::vector<int>> clusters) {
    Clustering c;
    c.clusters = std::move(clusters);
    return c;
}

// Independent definition-by-definition oracle, written directly from the
// metric definitions with no shared code with the implementation.
struct Oracle {
    static std::map<int, int> member_to_cluster(const Clustering& c) {
        std::map<int, int> out;
        for (std::size_t i = 0; i < c.clusters.size(); ++i)
            for (int m : c.clusters[i]) out[m] = (int)i;
        return out;
    }

    static double macro_p(const Clustering& c, const Clustering& gold) {
        auto gold_of = member_to_cluster(gold);
        int pure = 0;
        for (const auto& cl : c.clusters) {
            bool ok = true;
            for (int m : cl)
                if (gold_of.at(m) != gold_of.at(cl.front())) ok = false;
            pure += ok;
        }
        return c.clusters.empty() ? 0.0 : (double)pure / (double)c.clusters.size();
    }

    static double micro_p(const Clustering& c, const Clustering& gold) {
        auto gold_of = member_to_cluster(gold);
        long correct = 0, total = 0;
        for (const auto& cl : c.clusters) {
            std::map<int, long> counts;
            for (int m : cl) ++counts[gold_of.at(m)];
            long best = 0;
            for (auto& [g, n] : counts) best = std::max(best, n);
            correct += best;
            total += (long)cl.size();
        }
        return total == 0 ? 0.0 : (double)correct / (double)total;
    }

    static double pair_p(const Clustering& c, const Clustering& gold) {
        auto gold_of = member_to_cluster(gold);
        long hits = 0, possible = 0;
        for (const auto& cl : c.clusters)
            for (std::size_t i = 0; i < cl.size(); ++i)
                for (std::size_t j = i + 1; j < cl.size(); ++j) {
                    ++possible;
                    if (gold_of.at(cl[i]) == gold_of.at(cl[j])) ++hits;
                }
        return possible == 0 ? 0.0 : (double)hits / (double)possible;
    }

    static double f1(double p, double r) { return p + r == 0.0 ? 0.0 : 2 * p * r / (p + r); }
};

Clustering random_partition(const std::vector<int>& items, int max_k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kdist(1, max_k);
    int k = kdist(rng);
    std::vector<std::vector<int>> clusters(k);
    std::uniform_int_distribution<int> cdist(0, k - 1);
    for (int item : items) clusters[cdist(rng)].push_back(item);
    Clustering c;
    for (auto& cl : clusters)
        if (!cl.empty()) c.clusters.push_back(cl);
    return c;
}

}  // namespace

TEST_CASE("perfect clustering scores 1 everywhere") {
    Clustering c = make({{0, 1}, {2}});
    EvalReport r = evaluate_clusterings(c, c, "test");
    CHECK(r.macro.f1 == 1.0);
    CHECK(r.micro.f1 == 1.0);
    CHECK(r.pair.f1 == 1.0);
    CHECK(r.average_f1 == 1.0);
}

TEST_CASE("a single impure cluster zeroes macro") {
    Clustering c = make({{0, 1}});
    Clustering gold = make({{0}, {1}});
    Prf m = macro_prf(c, gold);
    CHECK(m.precision == 0.0);
    // gold singletons are trivially pure, so recall is 1; F1 still collapses
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 0.0);
}

TEST_CASE("micro counts dominant-gold overlap") {
    Clustering c = make({{0, 1}});
    Clustering gold = make({{0}, {1}});
    CHECK(micro_prf(c, gold).precision == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("pair metric on the worked three-NP case") {
    Clustering c = make({{0, 1, 2}});
    Clustering gold = make({{0, 1}, {2}});
    Prf p = pair_prf(c, gold);
    CHECK(p.precision == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p.recall == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.f1 == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("all singletons yield zero pair scores by convention") {
    Clustering c = make({{0}, {1}, {2}});
    Prf p = pair_prf(c, c);
    CHECK(p.precision == 0.0);
    CHECK(p.recall == 0.0);
    CHECK(p.f1 == 0.0);
}

TEST_CASE("empty clustering is an error") {
    Clustering empty;
    Clustering gold = make({{0}});
    CHECK_THROWS(macro_prf(empty, gold));
    CHECK_THROWS(micro_prf(empty, gold));
    CHECK_THROWS(pair_prf(empty, gold));
}

TEST_CASE("harmonic f1 conventions") {
    CHECK(harmonic_f1(0.0, 0.0) == 0.0);
    CHECK(harmonic_f1(1.0, 1.0) == 1.0);
    CHECK(harmonic_f1(0.5, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("average F1 reproduces the published row arithmetic") {
    // mean(0.6974, 0.6877, 0.4499) should print as 0.6117
    double mean = (0.6974 + 0.6877 + 0.4499) / 3.0;
    CHECK(std::abs(mean - 0.6117) <= 0.0005);
}

TEST_CASE("duality: precision of (C,E) equals recall of (E,C)") {
    std::mt19937_64 rng(42);
    std::vector<int> items(20);
    for (int i = 0; i < 20; ++i) items[i] = i;
    for (int trial = 0; trial < 200; ++trial) {
        Clustering c = random_partition(items, 6, rng);
        Clustering e = random_partition(items, 6, rng);
        CHECK(macro_prf(c, e).precision == doctest::Approx(macro_prf(e, c).recall).epsilon(1e-12));
        CHECK(micro_prf(c, e).precision == doctest::Approx(micro_prf(e, c).recall).epsilon(1e-12));
        CHECK(pair_prf(c, e).precision == doctest::Approx(pair_prf(e, c).recall).epsilon(1e-12));
    }
}

TEST_CASE("brute-force oracle equivalence on random instances") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ndist(2, 30);
    for (int trial = 0; trial < 500; ++trial) {
        int n = ndist(rng);
        std::vector<int> items(n);
        for (int i = 0; i < n; ++i) items[i] = i;
        Clustering c = random_partition(items, 8, rng);
        Clustering gold = random_partition(items, 8, rng);

        Prf macro = macro_prf(c, gold);
        CHECK(macro.precision == doctest::Approx(Oracle::macro_p(c, gold)).epsilon(1e-12));
        CHECK(macro.recall == doctest::Approx(Oracle::macro_p(gold, c)).epsilon(1e-12));
        CHECK(macro.f1 ==
              doctest::Approx(Oracle::f1(macro.precision, macro.recall)).epsilon(1e-12));

        Prf micro = micro_prf(c, gold);
        CHECK(micro.precision == doctest::Approx(Oracle::micro_p(c, gold)).epsilon(1e-12));
        CHECK(micro.recall == doctest::Approx(Oracle::micro_p(gold, c)).epsilon(1e-12));

        Prf pair = pair_prf(c, gold);
        CHECK(pair.precision == doctest::Approx(Oracle::pair_p(c, gold)).epsilon(1e-12));
        CHECK(pair.recall == doctest::Approx(Oracle::pair_p(gold, c)).epsilon(1e-12));
    }
}

TEST_CASE("report format lists the three metrics and the average") {
    Clustering c = make({{0, 1}, {2}});
    EvalReport r = evaluate_clusterings(c, c, "test");
    std::string text = format_report(r);
    CHECK(text.find("macro") != std::string::npos);
    CHECK(text.find("micro") != std::string::npos);
    CHECK(text.find("pair") != std::string::npos);
    CHECK(text.find("average_f1") != std::string::npos);
}

TEST_CASE("invariance under cluster relabeling") {
    Clustering c = make({{0, 1}, {2, 3}});
    Clustering swapped = make({{2, 3}, {0, 1}});
    Clustering gold = make({{0, 2}, {1, 3}});
    EvalReport a = evaluate_clusterings(c, gold, "test");
    EvalReport b = evaluate_clusterings(swapped, gold, "test");
    CHECK(a.macro.f1 == b.macro.f1);
    CHECK(a.micro.f1 == b.micro.f1);
    CHECK(a.pair.f1 == b.pair.f1);
}
