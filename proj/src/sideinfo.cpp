#include "mulcanon/sideinfo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mulcanon {

void SidePairSet::add(SidePair pair) {
    if (pair.a == pair.b) throw std::invalid_argument("side pair must link distinct phrases");
    if (pair.a > pair.b) std::swap(pair.a, pair.b);
    if (!(pair.weight > 0.0)) throw std::invalid_argument("side pair weight must be positive");
    for (auto& existing : pairs) {
        if (existing.a == pair.a && existing.b == pair.b && existing.source == pair.source) {
            existing.weight = std::max(existing.weight, pair.weight);
            return;
        }
    }
    pairs.push_back(pair);
}

double idf_overlap_score(const std::vector<std::string>& tokens_a,
                         const std::vector<std::string>& tokens_b,
                         const std::map<std::string, long>& freqs) {
    std::set<std::string> sa(tokens_a.begin(), tokens_a.end());
    std::set<std::string> sb(tokens_b.begin(), tokens_b.end());
    auto idf = [&freqs](const std::string& tok) {
        auto it = freqs.find(tok);
        long f = it == freqs.end() ? 1 : it->second;
        return 1.0 / std::log(1.0 + static_cast<double>(f));
    };
    double inter = 0.0, uni = 0.0;
    for (const auto& tok : sa) {
        uni += idf(tok);
        if (sb.count(tok)) inter += idf(tok);
    }
    for (const auto& tok : sb)
        if (!sa.count(tok)) uni += idf(tok);
    return uni > 0.0 ? inter / uni : 0.0;
}

SidePairSet idf_overlap_pairs(const OkbDataset& dataset, const TokenFrequencies& freqs,
                              double threshold, PhraseKind kind) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("idf threshold must lie in (0,1]");
    const auto& phrases = dataset.phrases(kind);
    const auto& counts = freqs.counts(kind);

    // token inverted index; only phrases sharing a token can score above 0
    std::unordered_map<std::string, std::vector<int>> index;
    for (const auto& p : phrases)
        for (const auto& tok : std::set<std::string>(p.tokens.begin(), p.tokens.end()))
            index[tok].push_back(p.id);

    std::set<std::pair<int, int>> candidates;
    for (const auto& [tok, ids] : index)
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                candidates.emplace(std::min(ids[i], ids[j]), std::max(ids[i], ids[j]));

    SidePairSet out;
    for (const auto& [a, b] : candidates) {
        double score = idf_overlap_score(phrases[a].tokens, phrases[b].tokens, counts);
        if (score >= threshold)
            out.add({a, b, SideSource::Idf, score});
    }
    return out;
}

std::string morph_normalize(const Phrase& phrase) {
    std::vector<std::string> tokens = phrase.tokens;  // already lowercased
    // strip leading articles
    while (!tokens.empty() &&
           (tokens.front() == "a" || tokens.front() == "an" || tokens.front() == "the"))
        tokens.erase(tokens.begin());
    if (tokens.empty()) return {};
    // strip possessive suffix on any token
    for (auto& tok : tokens) {
        if (tok.size() > 2 && tok.ends_with("'s"))
            tok.resize(tok.size() - 2);
        else if (tok.size() > 1 && tok.ends_with("'"))
            tok.resize(tok.size() - 1);
    }
    // singularize the trailing token with simple suffix rules
    std::string& last = tokens.back();
    if (last.size() > 3 && last.ends_with("ies"))
        last = last.substr(0, last.size() - 3) + "y";
    else if (last.size() > 2 &&
             (last.ends_with("ses") || last.ends_with("xes") || last.ends_with("zes") ||
              last.ends_with("ches") || last.ends_with("shes")))
        last.resize(last.size() - 2);
    else if (last.size() > 1 && last.ends_with("s") && !last.ends_with("ss"))
        last.resize(last.size() - 1);

    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) joined.push_back(' ');
        joined += tokens[i];
    }
    return joined;
}

SidePairSet morph_pairs(const OkbDataset& dataset, PhraseKind kind) {
    std::map<std::string, std::vector<int>> groups;
    for (const auto& p : dataset.phrases(kind)) {
        std::string norm = morph_normalize(p);
        if (!norm.empty()) groups[norm].push_back(p.id);
    }
    SidePairSet out;
    for (const auto& [norm, ids] : groups)
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                out.add({ids[i], ids[j], SideSource::Morph, 1.0});
    return out;
}

SidePairSet load_external_pairs(const std::string& path, SideSource source,
                                const OkbDataset& dataset) {
    if (source != SideSource::Ppdb && source != SideSource::EntityLink)
        throw std::invalid_argument("external pair files carry ppdb or entity-link pairs");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open side pair file: " + path);

    std::unordered_map<std::string, int> np_index;
    for (const auto& p : dataset.nps) np_index.emplace(p.surface, p.id);

    SidePairSet out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, weight_str;
        if (!std::getline(ss, a, '\t') || !std::getline(ss, b, '\t') ||
            !std::getline(ss, weight_str, '\t'))
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected surface_a<TAB>surface_b<TAB>weight");
        double weight;
        try {
            weight = std::stod(weight_str);
        } catch (const std::exception&) {
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": malformed weight '" + weight_str + "'");
        }
        auto ia = np_index.find(a);
        auto ib = np_index.find(b);
        if (ia == np_index.end() || ib == np_index.end()) {
            ++out.skipped_rows;
            continue;
        }
        out.add({ia->second, ib->second, source, weight});
    }
    return out;
}

SideLossResult side_loss(const SidePairSet& pairs,
                         const std::vector<Eigen::VectorXd>& latents,
                         const std::map<SideSource, double>& coefficients) {
    SideLossResult result;
    if (pairs.pairs.empty()) return result;  // empty set is loss 0, not an error
    const double inv_n = 1.0 / static_cast<double>(pairs.pairs.size());

    for (const auto& pair : pairs.pairs) {
        auto cit = coefficients.find(pair.source);
        double coef = cit == coefficients.end() ? 1.0 : cit->second;
        const Eigen::VectorXd& wa = latents.at(pair.a);
        const Eigen::VectorXd& wb = latents.at(pair.b);
        Eigen::VectorXd diff = wa - wb;
        result.loss += coef * pair.weight * diff.squaredNorm() * inv_n;

        Eigen::VectorXd g = 2.0 * coef * pair.weight * inv_n * diff;
        auto [ita, _a] = result.grad_latents.try_emplace(
            pair.a, Eigen::VectorXd::Zero(wa.size()));
        ita->second += g;
        auto [itb, _b] = result.grad_latents.try_emplace(
            pair.b, Eigen::VectorXd::Zero(wb.size()));
        itb->second -= g;
    }
    return result;
}

}  // namespace mulcanon
