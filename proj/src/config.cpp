#include "mulcanon/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mulcanon {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "data.triples", "data.vectors", "data.format", "data.dim",
        "data.validation_fraction",
        "seed",
        "train.lr_step1", "train.lr_step2", "train.epochs_per_step",
        "train.negatives_k", "train.optimizer",
        "train.coef_clu", "train.coef_diff", "train.coef_side", "train.coef_kge",
        "diffusion.T", "diffusion.beta_start", "diffusion.beta_end",
        "diffusion.noise_scale",
        "hac.linkage", "hac.distance", "hac.center",
        "hac.np_threshold", "hac.rp_threshold",
        "kge.model", "kge.margin",
        "side.idf_threshold", "side.use_idf", "side.use_morph",
        "side.ppdb_path", "side.entity_link_path",
        "side.coef_ppdb", "side.coef_entity_link", "side.coef_morph", "side.coef_idf",
        "embedding.oov",
        "unlearn.proportion", "unlearn.seed", "unlearn.regen_seed", "unlearn.sweep",
        "eval.subset",
    };
    return keys;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': not a number: '" + value + "'");
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long n = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return n;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': not an integer: '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config key '" + key + "': not a boolean: '" + value + "'");
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

void require_path(const std::string& key, const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error("config key '" + key + "': path does not exist: " + path);
}

}  // namespace

RunConfig parse_run_config(const std::string& path,
                           const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> kv;
    {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": expected key=value");
            kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
        }
    }
    for (const auto& [k, v] : overrides) kv[k] = v;

    for (const auto& [k, v] : kv)
        if (!known_keys().count(k))
            throw std::runtime_error("unknown config key: '" + k + "'");

    RunConfig cfg;
    cfg.raw = kv;
    auto get = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    if (auto v = get("data.triples")) cfg.triples_path = *v;
    if (auto v = get("data.vectors")) cfg.vectors_path = *v;
    if (cfg.triples_path.empty()) throw std::runtime_error("config: data.triples is required");
    if (cfg.vectors_path.empty()) throw std::runtime_error("config: data.vectors is required");
    require_path("data.triples", cfg.triples_path);
    require_path("data.vectors", cfg.vectors_path);

    if (auto v = get("data.format")) {
        if (*v == "reverb") cfg.format = DatasetFormat::ReverbStyle;
        else if (*v == "canonicnell") cfg.format = DatasetFormat::CanonicnellStyle;
        else if (*v == "synthetic") cfg.format = DatasetFormat::Synthetic;
        else throw std::runtime_error("config data.format: unknown format '" + *v + "'");
    }
    if (auto v = get("data.dim")) cfg.dim = static_cast<int>(to_long("data.dim", *v));
    if (auto v = get("data.validation_fraction"))
        cfg.validation_fraction = to_double("data.validation_fraction", *v);

    TrainConfig& t = cfg.train;
    if (auto v = get("seed")) t.seed = static_cast<std::uint64_t>(to_long("seed", *v));
    if (auto v = get("train.lr_step1")) t.lr_step1 = to_double("train.lr_step1", *v);
    if (auto v = get("train.lr_step2")) t.lr_step2 = to_double("train.lr_step2", *v);
    if (auto v = get("train.epochs_per_step"))
        t.epochs_per_step = static_cast<int>(to_long("train.epochs_per_step", *v));
    if (auto v = get("train.negatives_k"))
        t.negatives_k = static_cast<int>(to_long("train.negatives_k", *v));
    if (auto v = get("train.optimizer")) {
        if (*v == "adam") t.optimizer = OptimizerKind::Adam;
        else if (*v == "sgd") t.optimizer = OptimizerKind::Sgd;
        else throw std::runtime_error("config train.optimizer: unknown '" + *v + "'");
    }
    if (auto v = get("train.coef_clu")) t.coef_clu = to_double("train.coef_clu", *v);
    if (auto v = get("train.coef_diff")) t.coef_diff = to_double("train.coef_diff", *v);
    if (auto v = get("train.coef_side")) t.coef_side = to_double("train.coef_side", *v);
    if (auto v = get("train.coef_kge")) t.coef_kge = to_double("train.coef_kge", *v);

    if (auto v = get("diffusion.T")) t.T = static_cast<int>(to_long("diffusion.T", *v));
    if (auto v = get("diffusion.beta_start")) t.beta_start = to_double("diffusion.beta_start", *v);
    if (auto v = get("diffusion.beta_end")) t.beta_end = to_double("diffusion.beta_end", *v);
    if (auto v = get("diffusion.noise_scale"))
        t.noise_scale = to_double("diffusion.noise_scale", *v);

    if (auto v = get("hac.linkage")) {
        if (*v == "complete") t.linkage = Linkage::Complete;
        else if (*v == "average") t.linkage = Linkage::Average;
        else if (*v == "single") t.linkage = Linkage::Single;
        else throw std::runtime_error("config hac.linkage: unknown '" + *v + "'");
    }
    if (auto v = get("hac.distance")) {
        if (*v == "cosine") t.distance = HacDistance::Cosine;
        else if (*v == "euclidean") t.distance = HacDistance::Euclidean;
        else throw std::runtime_error("config hac.distance: unknown '" + *v + "'");
    }
    if (auto v = get("hac.center")) {
        if (*v == "centroid") t.center = CenterRule::Centroid;
        else if (*v == "medoid") t.center = CenterRule::Medoid;
        else throw std::runtime_error("config hac.center: unknown '" + *v + "'");
    }
    if (auto v = get("hac.np_threshold")) t.np_threshold = to_double("hac.np_threshold", *v);
    if (auto v = get("hac.rp_threshold")) t.rp_threshold = to_double("hac.rp_threshold", *v);

    if (auto v = get("kge.model")) {
        if (*v == "transe") t.kge = KgeKind::TransE;
        else if (*v == "hole") t.kge = KgeKind::HolE;
        else throw std::runtime_error("config kge.model: unknown '" + *v + "'");
    }
    if (auto v = get("kge.margin")) t.margin = to_double("kge.margin", *v);

    if (auto v = get("side.idf_threshold")) t.idf_threshold = to_double("side.idf_threshold", *v);
    if (auto v = get("side.use_idf")) t.use_idf_pairs = to_bool("side.use_idf", *v);
    if (auto v = get("side.use_morph")) t.use_morph_pairs = to_bool("side.use_morph", *v);
    if (auto v = get("side.coef_ppdb"))
        t.side_coefficients[SideSource::Ppdb] = to_double("side.coef_ppdb", *v);
    if (auto v = get("side.coef_entity_link"))
        t.side_coefficients[SideSource::EntityLink] = to_double("side.coef_entity_link", *v);
    if (auto v = get("side.coef_morph"))
        t.side_coefficients[SideSource::Morph] = to_double("side.coef_morph", *v);
    if (auto v = get("side.coef_idf"))
        t.side_coefficients[SideSource::Idf] = to_double("side.coef_idf", *v);

    if (auto v = get("embedding.oov")) {
        if (*v == "zero") t.oov = OovPolicy::Zero;
        else if (*v == "seeded-random") t.oov = OovPolicy::SeededRandom;
        else throw std::runtime_error("config embedding.oov: unknown '" + *v + "'");
    }

    if (auto v = get("side.ppdb_path")) {
        cfg.ppdb_path = *v;
        require_path("side.ppdb_path", cfg.ppdb_path);
    }
    if (auto v = get("side.entity_link_path")) {
        cfg.entity_link_path = *v;
        require_path("side.entity_link_path", cfg.entity_link_path);
    }

    if (auto v = get("unlearn.proportion"))
        cfg.forget_proportion = to_double("unlearn.proportion", *v);
    if (auto v = get("unlearn.seed"))
        cfg.forget_seed = static_cast<std::uint64_t>(to_long("unlearn.seed", *v));
    if (auto v = get("unlearn.regen_seed"))
        cfg.regen_seed = static_cast<std::uint64_t>(to_long("unlearn.regen_seed", *v));
    if (auto v = get("unlearn.sweep")) {
        std::stringstream ss(*v);
        std::string part;
        while (std::getline(ss, part, ','))
            cfg.forget_sweep.push_back(to_double("unlearn.sweep", trim(part)));
    }

    if (auto v = get("eval.subset")) {
        if (*v != "test" && *v != "forget")
            throw std::runtime_error("config eval.subset: expected test or forget");
        cfg.eval_subset = *v;
    }
    return cfg;
}

std::string serialize_run_config(const RunConfig& config) {
    std::ostringstream out;
    for (const auto& [k, v] : config.raw) out << k << " = " << v << '\n';
    return out.str();
}

std::map<std::string, std::string> train_config_to_kv(const TrainConfig& c) {
    std::map<std::string, std::string> kv;
    auto num = [](double d) {
        std::ostringstream ss;
        ss.precision(17);
        ss << d;
        return ss.str();
    };
    kv["lr_step1"] = num(c.lr_step1);
    kv["lr_step2"] = num(c.lr_step2);
    kv["epochs_per_step"] = std::to_string(c.epochs_per_step);
    kv["seed"] = std::to_string(c.seed);
    kv["negatives_k"] = std::to_string(c.negatives_k);
    kv["optimizer"] = c.optimizer == OptimizerKind::Adam ? "adam" : "sgd";
    kv["coef_clu"] = num(c.coef_clu);
    kv["coef_diff"] = num(c.coef_diff);
    kv["coef_side"] = num(c.coef_side);
    kv["coef_kge"] = num(c.coef_kge);
    kv["T"] = std::to_string(c.T);
    kv["beta_start"] = num(c.beta_start);
    kv["beta_end"] = num(c.beta_end);
    kv["noise_scale"] = num(c.noise_scale);
    kv["linkage"] = c.linkage == Linkage::Complete ? "complete"
                    : c.linkage == Linkage::Average ? "average" : "single";
    kv["distance"] = c.distance == HacDistance::Cosine ? "cosine" : "euclidean";
    kv["center"] = c.center == CenterRule::Centroid ? "centroid" : "medoid";
    kv["np_threshold"] = num(c.np_threshold);
    kv["rp_threshold"] = num(c.rp_threshold);
    kv["kge"] = c.kge == KgeKind::TransE ? "transe" : "hole";
    kv["margin"] = num(c.margin);
    kv["oov"] = c.oov == OovPolicy::Zero ? "zero" : "seeded-random";
    kv["idf_threshold"] = num(c.idf_threshold);
    kv["use_idf_pairs"] = c.use_idf_pairs ? "true" : "false";
    kv["use_morph_pairs"] = c.use_morph_pairs ? "true" : "false";
    auto coef = [&](SideSource s) {
        auto it = c.side_coefficients.find(s);
        return num(it == c.side_coefficients.end() ? 1.0 : it->second);
    };
    kv["side_coef_ppdb"] = coef(SideSource::Ppdb);
    kv["side_coef_entity_link"] = coef(SideSource::EntityLink);
    kv["side_coef_morph"] = coef(SideSource::Morph);
    kv["side_coef_idf"] = coef(SideSource::Idf);
    return kv;
}

TrainConfig train_config_from_kv(const std::map<std::string, std::string>& kv) {
    TrainConfig c;
    auto get = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error("missing train config key: " + key);
        return it->second;
    };
    c.lr_step1 = to_double("lr_step1", get("lr_step1"));
    c.lr_step2 = to_double("lr_step2", get("lr_step2"));
    c.epochs_per_step = static_cast<int>(to_long("epochs_per_step", get("epochs_per_step")));
    c.seed = static_cast<std::uint64_t>(to_long("seed", get("seed")));
    c.negatives_k = static_cast<int>(to_long("negatives_k", get("negatives_k")));
    c.optimizer = get("optimizer") == "adam" ? OptimizerKind::Adam : OptimizerKind::Sgd;
    c.coef_clu = to_double("coef_clu", get("coef_clu"));
    c.coef_diff = to_double("coef_diff", get("coef_diff"));
    c.coef_side = to_double("coef_side", get("coef_side"));
    c.coef_kge = to_double("coef_kge", get("coef_kge"));
    c.T = static_cast<int>(to_long("T", get("T")));
    c.beta_start = to_double("beta_start", get("beta_start"));
    c.beta_end = to_double("beta_end", get("beta_end"));
    c.noise_scale = to_double("noise_scale", get("noise_scale"));
    std::string linkage = get("linkage");
    c.linkage = linkage == "complete" ? Linkage::Complete
                : linkage == "average" ? Linkage::Average : Linkage::Single;
    c.distance = get("distance") == "cosine" ? HacDistance::Cosine : HacDistance::Euclidean;
    c.center = get("center") == "centroid" ? CenterRule::Centroid : CenterRule::Medoid;
    c.np_threshold = to_double("np_threshold", get("np_threshold"));
    c.rp_threshold = to_double("rp_threshold", get("rp_threshold"));
    c.kge = get("kge") == "transe" ? KgeKind::TransE : KgeKind::HolE;
    c.margin = to_double("margin", get("margin"));
    c.oov = get("oov") == "zero" ? OovPolicy::Zero : OovPolicy::SeededRandom;
    c.idf_threshold = to_double("idf_threshold", get("idf_threshold"));
    c.use_idf_pairs = to_bool("use_idf_pairs", get("use_idf_pairs"));
    c.use_morph_pairs = to_bool("use_morph_pairs", get("use_morph_pairs"));
    c.side_coefficients[SideSource::Ppdb] = to_double("side_coef_ppdb", get("side_coef_ppdb"));
    c.side_coefficients[SideSource::EntityLink] =
        to_double("side_coef_entity_link", get("side_coef_entity_link"));
    c.side_coefficients[SideSource::Morph] =
        to_double("side_coef_morph", get("side_coef_morph"));
    c.side_coefficients[SideSource::Idf] = to_double("side_coef_idf", get("side_coef_idf"));
    return c;
}

}  // namespace mulcanon
