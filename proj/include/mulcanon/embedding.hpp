#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>

#include "mulcanon/dataset.hpp"

namespace mulcanon {

enum class OovPolicy { Zero, SeededRandom };

struct WordVectorTable {
    int dim = 0;
    std::unordered_map<std::string, Eigen::VectorXd> vectors;
};

/// Per-phrase dense vectors, array-indexed by phrase id. These are the x0
/// inputs to the diffusion process; unlearning builds a new store instead of
/// mutating one in place.
struct EmbeddingStore {
    int dim = 0;
    std::vector<Eigen::VectorXd> np_vectors;
    std::vector<Eigen::VectorXd> rp_vectors;
    long oov_tokens = 0;
    long total_tokens = 0;

    const std::vector<Eigen::VectorXd>& vectors(PhraseKind k) const {
        return k == PhraseKind::NP ? np_vectors : rp_vectors;
    }
    std::vector<Eigen::VectorXd>& vectors(PhraseKind k) {
        return k == PhraseKind::NP ? np_vectors : rp_vectors;
    }
};

WordVectorTable load_word_vectors(const std::string& path, int dim);

Eigen::VectorXd embed_phrase(const Phrase& phrase, const WordVectorTable& table,
                             OovPolicy policy);

EmbeddingStore build_store(const OkbDataset& dataset, const WordVectorTable& table,
                           OovPolicy policy);

/// Deterministic per-token vector used by the seeded-random OOV policy.
Eigen::VectorXd oov_vector(const std::string& token, int dim);

}  // namespace mulcanon
