#include "mulcanon/embedding.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mulcanon {

WordVectorTable load_word_vectors(const std::string& path, int dim) {
    if (dim <= 0) throw std::invalid_argument("word vector dim must be positive");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word vector file: " + path);

    WordVectorTable table;
    table.dim = dim;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string token;
        ss >> token;
        Eigen::VectorXd vec(dim);
        int i = 0;
        double value;
        while (ss >> value) {
            if (i >= dim)
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": more than " + std::to_string(dim) + " floats");
            vec[i++] = value;
        }
        if (i != dim)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(dim) + " floats, got " + std::to_string(i));
        table.vectors.emplace(token, std::move(vec));  // first occurrence wins
    }
    return table;
}

Eigen::VectorXd oov_vector(const std::string& token, int dim) {
    std::seed_seq seq(token.begin(), token.end());
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

namespace {
Eigen::VectorXd embed_counting(const Phrase& phrase, const WordVectorTable& table,
                               OovPolicy policy, long* oov, long* total) {
    if (phrase.tokens.empty()) throw std::invalid_argument("phrase has no tokens");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim);
    for (const auto& tok : phrase.tokens) {
        if (total) ++*total;
        auto it = table.vectors.find(tok);
        if (it != table.vectors.end()) {
            sum += it->second;
        } else {
            if (oov) ++*oov;
            if (policy == OovPolicy::SeededRandom) sum += oov_vector(tok, table.dim);
            // zero policy: contributes the zero vector
        }
    }
    return sum / static_cast<double>(phrase.tokens.size());
}
}  // namespace

Eigen::VectorXd embed_phrase(const Phrase& phrase, const WordVectorTable& table,
                             OovPolicy policy) {
    return embed_counting(phrase, table, policy, nullptr, nullptr);
}

EmbeddingStore build_store(const OkbDataset& dataset, const WordVectorTable& table,
                           OovPolicy policy) {
    EmbeddingStore store;
    store.dim = table.dim;
    store.np_vectors.reserve(dataset.nps.size());
    store.rp_vectors.reserve(dataset.rps.size());
    for (const auto& p : dataset.nps)
        store.np_vectors.push_back(
            embed_counting(p, table, policy, &store.oov_tokens, &store.total_tokens));
    for (const auto& p : dataset.rps)
        store.rp_vectors.push_back(
            embed_counting(p, table, policy, &store.oov_tokens, &store.total_tokens));
    for (const auto& vecs : {std::cref(store.np_vectors), std::cref(store.rp_vectors)})
        for (const auto& v : vecs.get())
            if (!v.allFinite()) throw std::runtime_error("non-finite phrase embedding");
    return store;
}

}  // namespace mulcanon
