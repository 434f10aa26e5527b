#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "mulcanon/dataset.hpp"

namespace mulcanon {

enum class SideSource { Ppdb, EntityLink, Morph, Idf };

struct SidePair {
    int a = -1;
    int b = -1;  // a < b, same phrase kind
    SideSource source = SideSource::Idf;
    double weight = 0.0;
};

/// Deduplicated by unordered (a, b, source); the max weight is kept.
struct SidePairSet {
    std::vector<SidePair> pairs;
    long skipped_rows = 0;  // unresolvable surfaces in external files

    void add(SidePair pair);
};

/// IDF-weighted token overlap: score(p,q) =
///   sum_{w in inter} 1/log(1+f(w)) / sum_{w in union} 1/log(1+f(w)).
/// Candidate generation is blocked by a token inverted index, since pairs
/// without a shared token score 0.
SidePairSet idf_overlap_pairs(const OkbDataset& dataset, const TokenFrequencies& freqs,
                              double threshold, PhraseKind kind);

/// Links phrases that agree after lowercasing, article stripping, possessive
/// stripping, and suffix-rule singularization of the trailing token.
SidePairSet morph_pairs(const OkbDataset& dataset, PhraseKind kind);

std::string morph_normalize(const Phrase& phrase);

SidePairSet load_external_pairs(const std::string& path, SideSource source,
                                const OkbDataset& dataset);

struct SideLossResult {
    double loss = 0.0;
    std::map<int, Eigen::VectorXd> grad_latents;  // phrase id -> dL/dw
};

/// Weighted latent-space pair attraction, averaged over the pair count.
SideLossResult side_loss(const SidePairSet& pairs,
                         const std::vector<Eigen::VectorXd>& latents,
                         const std::map<SideSource, double>& coefficients);

double idf_overlap_score(const std::vector<std::string>& tokens_a,
                         const std::vector<std::string>& tokens_b,
                         const std::map<std::string, long>& freqs);

}  // namespace mulcanon
