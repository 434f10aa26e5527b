#pragma once

#include <string>
#include <vector>

namespace mulcanon {

/// A partition of NP ids for evaluation purposes.
struct Clustering {
    std::vector<std::vector<int>> clusters;
};

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    Prf macro, micro, pair;
    double average_f1 = 0.0;
    std::string subset;  // "forget" or "test"
};

Prf macro_prf(const Clustering& predicted, const Clustering& gold);
Prf micro_prf(const Clustering& predicted, const Clustering& gold);
Prf pair_prf(const Clustering& predicted, const Clustering& gold);

double harmonic_f1(double precision, double recall);

EvalReport evaluate_clusterings(const Clustering& predicted, const Clustering& gold,
                                const std::string& subset);

std::string format_report(const EvalReport& report);

}  // namespace mulcanon
