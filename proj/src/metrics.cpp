#include "mulcanon/metrics.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mulcanon {

namespace {

void check_nonempty(const Clustering& c, const char* name) {
    if (c.clusters.empty())
        throw std::invalid_argument(std::string(name) + " clustering is empty");
}

std::map<int, int> membership(const Clustering& c) {
    std::map<int, int> out;
    for (std::size_t i = 0; i < c.clusters.size(); ++i)
        for (int np : c.clusters[i]) {
            auto [it, inserted] = out.emplace(np, static_cast<int>(i));
            if (!inserted) throw std::invalid_argument("clustering is not a partition");
        }
    return out;
}

/// Fraction of clusters in `a` whose members all share one cluster of `b`.
double purity_fraction(const Clustering& a, const std::map<int, int>& b_of) {
    long pure = 0;
    for (const auto& cluster : a.clusters) {
        bool ok = true;
        int ref = -1;
        for (int np : cluster) {
            auto it = b_of.find(np);
            if (it == b_of.end()) {
                ok = false;
                break;
            }
            if (ref == -1)
                ref = it->second;
            else if (it->second != ref) {
                ok = false;
                break;
            }
        }
        if (ok && !cluster.empty()) ++pure;
    }
    return static_cast<double>(pure) / static_cast<double>(a.clusters.size());
}

double micro_fraction(const Clustering& a, const std::map<int, int>& b_of) {
    long correct = 0, total = 0;
    for (const auto& cluster : a.clusters) {
        std::map<int, long> counts;
        for (int np : cluster) {
            auto it = b_of.find(np);
            if (it != b_of.end()) ++counts[it->second];
        }
        long best = 0;
        for (const auto& [_, n] : counts) best = std::max(best, n);
        correct += best;
        total += static_cast<long>(cluster.size());
    }
    return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

long cocluster_pairs(const Clustering& c) {
    long n = 0;
    for (const auto& cluster : c.clusters) {
        long s = static_cast<long>(cluster.size());
        n += s * (s - 1) / 2;
    }
    return n;
}

}  // namespace

double harmonic_f1(double precision, double recall) {
    double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Prf macro_prf(const Clustering& predicted, const Clustering& gold) {
    check_nonempty(predicted, "predicted");
    check_nonempty(gold, "gold");
    auto gold_of = membership(gold);
    auto pred_of = membership(predicted);
    Prf out;
    out.precision = purity_fraction(predicted, gold_of);
    out.recall = purity_fraction(gold, pred_of);
    out.f1 = harmonic_f1(out.precision, out.recall);
    return out;
}

Prf micro_prf(const Clustering& predicted, const Clustering& gold) {
    check_nonempty(predicted, "predicted");
    check_nonempty(gold, "gold");
    auto gold_of = membership(gold);
    auto pred_of = membership(predicted);
    Prf out;
    out.precision = micro_fraction(predicted, gold_of);
    out.recall = micro_fraction(gold, pred_of);
    out.f1 = harmonic_f1(out.precision, out.recall);
    return out;
}

Prf pair_prf(const Clustering& predicted, const Clustering& gold) {
    check_nonempty(predicted, "predicted");
    check_nonempty(gold, "gold");
    auto gold_of = membership(gold);
    membership(predicted);  // partition check

    long hits = 0;
    for (const auto& cluster : predicted.clusters)
        for (std::size_t i = 0; i < cluster.size(); ++i)
            for (std::size_t j = i + 1; j < cluster.size(); ++j) {
                auto a = gold_of.find(cluster[i]);
                auto b = gold_of.find(cluster[j]);
                if (a != gold_of.end() && b != gold_of.end() && a->second == b->second)
                    ++hits;
            }

    long pred_pairs = cocluster_pairs(predicted);
    long gold_pairs = cocluster_pairs(gold);
    Prf out;
    out.precision = pred_pairs > 0 ? static_cast<double>(hits) / pred_pairs : 0.0;
    out.recall = gold_pairs > 0 ? static_cast<double>(hits) / gold_pairs : 0.0;
    out.f1 = harmonic_f1(out.precision, out.recall);
    return out;
}

EvalReport evaluate_clusterings(const Clustering& predicted, const Clustering& gold,
                                const std::string& subset) {
    EvalReport report;
    report.macro = macro_prf(predicted, gold);
    report.micro = micro_prf(predicted, gold);
    report.pair = pair_prf(predicted, gold);
    report.average_f1 = (report.macro.f1 + report.micro.f1 + report.pair.f1) / 3.0;
    report.subset = subset;
    return report;
}

std::string format_report(const EvalReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    auto row = [&](const char* name, const Prf& prf) {
        out << name << '\t' << prf.precision << '\t' << prf.recall << '\t' << prf.f1 << '\n';
    };
    out << "subset\t" << report.subset << '\n';
    out << "metric\tprecision\trecall\tf1\n";
    row("macro", report.macro);
    row("micro", report.micro);
    row("pair", report.pair);
    out << "average_f1\t" << report.average_f1 << '\n';
    return out.str();
}

}  // namespace mulcanon
