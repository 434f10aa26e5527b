#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mulcanon {

enum class PhraseKind { NP, RP };

struct Phrase {
    int id = -1;
    std::string surface;
    std::vector<std::string> tokens;  // lowercased, whitespace-split
    PhraseKind kind = PhraseKind::NP;
};

struct OpenTriple {
    int id = -1;
    int head = -1;  // NP id
    int rel = -1;   // RP id
    int tail = -1;  // NP id
    std::optional<std::string> gold_head;
    std::optional<std::string> gold_tail;
    std::vector<std::string> source_sentences;
};

enum class DatasetFormat { ReverbStyle, CanonicnellStyle, Synthetic };

/// OIE triples plus deduplicated phrase tables. Phrase ids are dense 0..n-1
/// per kind so embedding stores can be array-indexed. Immutable after load.
struct OkbDataset {
    std::vector<Phrase> nps;
    std::vector<Phrase> rps;
    std::vector<OpenTriple> triples;
    // gold entity id -> sorted NP ids; every gold-linked NP in exactly one cluster
    std::map<std::string, std::vector<int>> gold_clusters;
    std::set<int> validation_triples;  // empty unless a validation split was requested

    const std::vector<Phrase>& phrases(PhraseKind k) const {
        return k == PhraseKind::NP ? nps : rps;
    }
    bool structurally_equal(const OkbDataset& other) const;
};

struct ForgetSpec {
    double proportion = 0.0;
    std::uint64_t seed = 0;
    std::set<int> forget_triples;
    std::set<int> retained_triples;
};

OkbDataset load_dataset(const std::string& path, DatasetFormat format,
                        double validation_fraction = 0.0, std::uint64_t split_seed = 0);

/// Uniform sample without replacement over triple ids; deterministic per seed.
ForgetSpec split_forget(const OkbDataset& dataset, double proportion, std::uint64_t seed);

struct TokenFrequencies {
    std::map<std::string, long> np_counts;
    std::map<std::string, long> rp_counts;
    const std::map<std::string, long>& counts(PhraseKind k) const {
        return k == PhraseKind::NP ? np_counts : rp_counts;
    }
};

TokenFrequencies token_frequencies(const OkbDataset& dataset);

/// NP ids occurring in any of the given triples (sorted, deduplicated).
std::vector<int> nps_of_triples(const OkbDataset& dataset, const std::set<int>& triple_ids);
std::vector<int> rps_of_triples(const OkbDataset& dataset, const std::set<int>& triple_ids);

/// FNV-1a content hash over the canonical serialization of the dataset.
std::uint64_t dataset_fingerprint(const OkbDataset& dataset);

std::vector<std::string> tokenize(const std::string& surface);

}  // namespace mulcanon
