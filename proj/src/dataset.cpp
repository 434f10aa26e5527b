#include "mulcanon/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mulcanon {

std::vector<std::string> tokenize(const std::string& surface) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : surface) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == '\t') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

int intern_phrase(std::vector<Phrase>& table,
                  std::unordered_map<std::string, int>& index,
                  const std::string& surface, PhraseKind kind,
                  long line_no) {
    auto it = index.find(surface);
    if (it != index.end()) return it->second;
    Phrase p;
    p.id = static_cast<int>(table.size());
    p.surface = surface;
    p.tokens = tokenize(surface);
    p.kind = kind;
    if (p.tokens.empty())
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": phrase surface has no tokens: '" + surface + "'");
    index.emplace(surface, p.id);
    table.push_back(std::move(p));
    return static_cast<int>(table.size()) - 1;
}

}  // namespace

OkbDataset load_dataset(const std::string& path, DatasetFormat /*format*/,
                        double validation_fraction, std::uint64_t split_seed) {
    // All supported formats share one record layout (the synthetic generator
    // emits the same TSV the benchmark dumps use).
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    OkbDataset ds;
    std::unordered_map<std::string, int> np_index, rp_index;
    std::map<int, std::string> np_gold;  // np id -> gold entity, for conflict checks
    std::set<int> seen_triple_ids;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() < 4)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected at least 4 tab-separated fields, got " +
                                     std::to_string(fields.size()));
        OpenTriple t;
        try {
            t.id = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": malformed triple id '" + fields[0] + "'");
        }
        if (!seen_triple_ids.insert(t.id).second)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": duplicate triple id " + std::to_string(t.id));
        t.head = intern_phrase(ds.nps, np_index, fields[1], PhraseKind::NP, line_no);
        t.rel = intern_phrase(ds.rps, rp_index, fields[2], PhraseKind::RP, line_no);
        t.tail = intern_phrase(ds.nps, np_index, fields[3], PhraseKind::NP, line_no);
        if (fields.size() > 4 && !fields[4].empty()) t.gold_head = fields[4];
        if (fields.size() > 5 && !fields[5].empty()) t.gold_tail = fields[5];
        if (fields.size() > 6 && !fields[6].empty()) {
            std::stringstream ss(fields[6]);
            std::string sent;
            while (std::getline(ss, sent, '|')) t.source_sentences.push_back(sent);
        }

        auto record_gold = [&](int np_id, const std::optional<std::string>& gold) {
            if (!gold) return;
            auto [it, inserted] = np_gold.emplace(np_id, *gold);
            if (!inserted && it->second != *gold)
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": NP '" + ds.nps[np_id].surface +
                                         "' linked to conflicting gold entities '" +
                                         it->second + "' and '" + *gold + "'");
        };
        record_gold(t.head, t.gold_head);
        record_gold(t.tail, t.gold_tail);
        ds.triples.push_back(std::move(t));
    }

    for (const auto& [np_id, gold] : np_gold) ds.gold_clusters[gold].push_back(np_id);
    for (auto& [gold, members] : ds.gold_clusters) std::sort(members.begin(), members.end());

    if (validation_fraction > 0.0) {
        if (validation_fraction >= 1.0)
            throw std::invalid_argument("validation fraction must be in [0,1)");
        std::vector<int> ids;
        ids.reserve(ds.triples.size());
        for (const auto& t : ds.triples) ids.push_back(t.id);
        std::mt19937_64 rng(split_seed);
        std::shuffle(ids.begin(), ids.end(), rng);
        auto n_val = static_cast<std::size_t>(
            std::llround(validation_fraction * static_cast<double>(ids.size())));
        ds.validation_triples.insert(ids.begin(), ids.begin() + static_cast<long>(n_val));
    }
    return ds;
}

bool OkbDataset::structurally_equal(const OkbDataset& other) const {
    auto phrase_eq = [](const std::vector<Phrase>& a, const std::vector<Phrase>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].id != b[i].id || a[i].surface != b[i].surface ||
                a[i].tokens != b[i].tokens || a[i].kind != b[i].kind)
                return false;
        return true;
    };
    if (!phrase_eq(nps, other.nps) || !phrase_eq(rps, other.rps)) return false;
    if (triples.size() != other.triples.size()) return false;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& a = triples[i];
        const auto& b = other.triples[i];
        if (a.id != b.id || a.head != b.head || a.rel != b.rel || a.tail != b.tail ||
            a.gold_head != b.gold_head || a.gold_tail != b.gold_tail ||
            a.source_sentences != b.source_sentences)
            return false;
    }
    return gold_clusters == other.gold_clusters;
}

ForgetSpec split_forget(const OkbDataset& dataset, double proportion, std::uint64_t seed) {
    if (!(proportion > 0.0 && proportion < 1.0))
        throw std::invalid_argument("forget proportion must lie in (0,1)");
    std::vector<int> ids;
    ids.reserve(dataset.triples.size());
    for (const auto& t : dataset.triples) ids.push_back(t.id);
    auto n_forget = static_cast<std::size_t>(
        std::llround(proportion * static_cast<double>(ids.size())));
    if (n_forget == 0) throw std::invalid_argument("empty forget set");

    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);

    ForgetSpec spec;
    spec.proportion = proportion;
    spec.seed = seed;
    spec.forget_triples.insert(ids.begin(), ids.begin() + static_cast<long>(n_forget));
    spec.retained_triples.insert(ids.begin() + static_cast<long>(n_forget), ids.end());
    return spec;
}

TokenFrequencies token_frequencies(const OkbDataset& dataset) {
    TokenFrequencies tf;
    for (const auto& p : dataset.nps)
        for (const auto& tok : p.tokens) ++tf.np_counts[tok];
    for (const auto& p : dataset.rps)
        for (const auto& tok : p.tokens) ++tf.rp_counts[tok];
    return tf;
}

namespace {
std::vector<int> phrases_of_triples(const OkbDataset& dataset,
                                    const std::set<int>& triple_ids, bool nps) {
    std::set<int> out;
    for (const auto& t : dataset.triples) {
        if (!triple_ids.count(t.id)) continue;
        if (nps) {
            out.insert(t.head);
            out.insert(t.tail);
        } else {
            out.insert(t.rel);
        }
    }
    return {out.begin(), out.end()};
}
}  // namespace

std::vector<int> nps_of_triples(const OkbDataset& dataset, const std::set<int>& triple_ids) {
    return phrases_of_triples(dataset, triple_ids, true);
}

std::vector<int> rps_of_triples(const OkbDataset& dataset, const std::set<int>& triple_ids) {
    return phrases_of_triples(dataset, triple_ids, false);
}

std::uint64_t dataset_fingerprint(const OkbDataset& dataset) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& p : dataset.nps) mix(p.surface);
    for (const auto& p : dataset.rps) mix(p.surface);
    for (const auto& t : dataset.triples) {
        mix(std::to_string(t.id));
        mix(std::to_string(t.head));
        mix(std::to_string(t.rel));
        mix(std::to_string(t.tail));
        mix(t.gold_head.value_or(""));
        mix(t.gold_tail.value_or(""));
    }
    return h;
}

}  // namespace mulcanon
