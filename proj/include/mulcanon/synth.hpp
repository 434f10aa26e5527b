#pragma once

#include <cstdint>
#include <string>

namespace mulcanon {

struct SynthParams {
    int entities = 50;
    int aliases_per_entity = 4;
    int relations = 10;
    int triples = 300;
    int dim = 16;
    double noise = 0.3;
    std::uint64_t seed = 0;
};

/// Planted-partition benchmark generator. Each gold entity gets a random
/// centroid; every alias embeds to centroid + Gaussian noise (exactly, via
/// a per-alias token whose vector completes the phrase mean). Emits a triple
/// file and a word-vector file in the standard layouts.
void generate_synthetic(const SynthParams& params, const std::string& triples_path,
                        const std::string& vectors_path);

}  // namespace mulcanon
