#include "mulcanon/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mulcanon/config.hpp"

namespace mulcanon {

namespace {

constexpr const char* kMagic = "mulcanon-checkpoint v1";
constexpr const char* kEnd = "end mulcanon-checkpoint";

void write_tensor(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
    out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_tensor(std::istream& in, const std::string& expected_name) {
    std::string tag, name;
    Eigen::Index rows, cols;
    if (!(in >> tag >> name >> rows >> cols) || tag != "tensor" || name != expected_name)
        throw std::runtime_error("checkpoint integrity error: expected tensor " +
                                 expected_name);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(in >> m(i, j)))
                throw std::runtime_error("checkpoint integrity error: truncated tensor " +
                                         expected_name);
    return m;
}

void write_clustering(std::ostream& out, const std::string& name,
                      const InitialClustering& c) {
    out << name << ' ' << c.labels.size() << ' ' << c.k << '\n';
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        if (i) out << ' ';
        out << c.labels[i];
    }
    out << '\n';
}

InitialClustering read_clustering(std::istream& in, const std::string& expected_name) {
    std::string name;
    std::size_t n;
    int k;
    if (!(in >> name >> n >> k) || name != expected_name)
        throw std::runtime_error("checkpoint integrity error: expected " + expected_name);
    InitialClustering c;
    c.k = k;
    c.labels.resize(n);
    c.clusters.assign(static_cast<std::size_t>(std::max(k, 0)), {});
    for (std::size_t i = 0; i < n; ++i) {
        if (!(in >> c.labels[i]))
            throw std::runtime_error("checkpoint integrity error: truncated " + expected_name);
        if (c.labels[i] < 0 || c.labels[i] >= k)
            throw std::runtime_error("checkpoint integrity error: label out of range in " +
                                     expected_name);
        c.clusters[static_cast<std::size_t>(c.labels[i])].push_back(static_cast<int>(i));
    }
    return c;
}

Eigen::MatrixXd stack_vectors(const std::vector<Eigen::VectorXd>& vecs, int dim) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(vecs.size()), dim);
    for (std::size_t i = 0; i < vecs.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = vecs[i].transpose();
    return m;
}

std::vector<Eigen::VectorXd> unstack_vectors(const Eigen::MatrixXd& m) {
    std::vector<Eigen::VectorXd> vecs(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) vecs[static_cast<std::size_t>(i)] = m.row(i);
    return vecs;
}

const char* source_code(SideSource s) {
    switch (s) {
        case SideSource::Ppdb: return "ppdb";
        case SideSource::EntityLink: return "entity-link";
        case SideSource::Morph: return "morph";
        case SideSource::Idf: return "idf";
    }
    return "?";
}

SideSource source_from(const std::string& s) {
    if (s == "ppdb") return SideSource::Ppdb;
    if (s == "entity-link") return SideSource::EntityLink;
    if (s == "morph") return SideSource::Morph;
    if (s == "idf") return SideSource::Idf;
    throw std::runtime_error("checkpoint integrity error: unknown side source " + s);
}

void write_pairs(std::ostream& out, const std::string& name, const SidePairSet& pairs) {
    out << name << ' ' << pairs.pairs.size() << '\n';
    for (const auto& p : pairs.pairs)
        out << p.a << ' ' << p.b << ' ' << source_code(p.source) << ' ' << p.weight << '\n';
}

SidePairSet read_pairs(std::istream& in, const std::string& expected_name) {
    std::string name;
    std::size_t n;
    if (!(in >> name >> n) || name != expected_name)
        throw std::runtime_error("checkpoint integrity error: expected " + expected_name);
    SidePairSet out;
    for (std::size_t i = 0; i < n; ++i) {
        SidePair p;
        std::string src;
        if (!(in >> p.a >> p.b >> src >> p.weight))
            throw std::runtime_error("checkpoint integrity error: truncated " + expected_name);
        p.source = source_from(src);
        out.pairs.push_back(p);
    }
    return out;
}

}  // namespace

void save_checkpoint(const ModelState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out.precision(17);

    out << kMagic << '\n';
    out << "fingerprint " << state.fingerprint << '\n';
    out << "dim " << state.dim << '\n';
    out << "step1_done " << (state.step1_done ? 1 : 0) << '\n';
    out << "step2_done " << (state.step2_done ? 1 : 0) << '\n';
    out << "regen_displacement_mean " << state.regen_displacement_mean << '\n';
    out << "regen_count " << state.regen_count << '\n';

    auto kv = train_config_to_kv(state.config);
    out << "config " << kv.size() << '\n';
    for (const auto& [k, v] : kv) out << k << ' ' << v << '\n';

    write_clustering(out, "np_clustering", state.np_clustering);
    write_clustering(out, "rp_clustering", state.rp_clustering);

    out << "kge_triples " << state.kge_triples.size() << '\n';
    for (std::size_t i = 0; i < state.kge_triples.size(); ++i) {
        if (i) out << ' ';
        out << state.kge_triples[i];
    }
    out << '\n';

    write_pairs(out, "np_pairs", state.np_pairs);
    write_pairs(out, "rp_pairs", state.rp_pairs);

    write_tensor(out, "np_store", stack_vectors(state.store.np_vectors, state.dim));
    write_tensor(out, "rp_store", stack_vectors(state.store.rp_vectors, state.dim));
    write_tensor(out, "np_means", state.np_mixture.means);
    write_tensor(out, "np_var_raw", state.np_mixture.var_raw);
    write_tensor(out, "np_prior_logits", state.np_mixture.prior_logits);
    write_tensor(out, "rp_means", state.rp_mixture.means);
    write_tensor(out, "rp_var_raw", state.rp_mixture.var_raw);
    write_tensor(out, "rp_prior_logits", state.rp_mixture.prior_logits);
    write_tensor(out, "betas", state.schedule.betas);
    write_tensor(out, "denoiser_W1", state.denoiser.W1);
    write_tensor(out, "denoiser_W2", state.denoiser.W2);
    write_tensor(out, "denoiser_W3", state.denoiser.W3);
    write_tensor(out, "denoiser_b1", state.denoiser.b1);
    write_tensor(out, "denoiser_b2", state.denoiser.b2);
    write_tensor(out, "denoiser_b3", state.denoiser.b3);
    write_tensor(out, "head_W_mu", state.head.W_mu);
    write_tensor(out, "head_W_sigma", state.head.W_sigma);
    write_tensor(out, "rel_embeddings", state.kge.relation_embeddings);

    out << kEnd << '\n';
    if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

ModelState load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

    std::string magic_line;
    std::getline(in, magic_line);
    if (magic_line != kMagic)
        throw std::runtime_error("checkpoint integrity error: bad magic");

    ModelState state;
    std::string key;
    auto expect = [&in, &key](const char* name) {
        if (!(in >> key) || key != name)
            throw std::runtime_error(std::string("checkpoint integrity error: expected ") +
                                     name);
    };
    expect("fingerprint");
    in >> state.fingerprint;
    expect("dim");
    in >> state.dim;
    int flag;
    expect("step1_done");
    in >> flag;
    state.step1_done = flag != 0;
    expect("step2_done");
    in >> flag;
    state.step2_done = flag != 0;
    expect("regen_displacement_mean");
    in >> state.regen_displacement_mean;
    expect("regen_count");
    in >> state.regen_count;

    expect("config");
    std::size_t n_kv;
    in >> n_kv;
    std::map<std::string, std::string> kv;
    for (std::size_t i = 0; i < n_kv; ++i) {
        std::string k, v;
        if (!(in >> k >> v))
            throw std::runtime_error("checkpoint integrity error: truncated config");
        kv[k] = v;
    }
    state.config = train_config_from_kv(kv);

    state.np_clustering = read_clustering(in, "np_clustering");
    state.rp_clustering = read_clustering(in, "rp_clustering");

    expect("kge_triples");
    std::size_t n_triples;
    in >> n_triples;
    state.kge_triples.resize(n_triples);
    for (auto& id : state.kge_triples)
        if (!(in >> id))
            throw std::runtime_error("checkpoint integrity error: truncated kge_triples");

    state.np_pairs = read_pairs(in, "np_pairs");
    state.rp_pairs = read_pairs(in, "rp_pairs");

    state.store.dim = state.dim;
    state.store.np_vectors = unstack_vectors(read_tensor(in, "np_store"));
    state.store.rp_vectors = unstack_vectors(read_tensor(in, "rp_store"));

    auto read_mixture = [&in](const std::string& prefix) {
        GaussianMixture gm;
        gm.means = read_tensor(in, prefix + "_means");
        gm.var_raw = read_tensor(in, prefix + "_var_raw");
        gm.prior_logits = read_tensor(in, prefix + "_prior_logits");
        gm.k = static_cast<int>(gm.means.rows());
        gm.d = static_cast<int>(gm.means.cols());
        return gm;
    };
    state.np_mixture = read_mixture("np");
    state.rp_mixture = read_mixture("rp");

    Eigen::MatrixXd betas = read_tensor(in, "betas");
    state.schedule = NoiseSchedule::custom(Eigen::VectorXd(betas.col(0)));

    state.denoiser.d = state.dim;
    state.denoiser.W1 = read_tensor(in, "denoiser_W1");
    state.denoiser.W2 = read_tensor(in, "denoiser_W2");
    state.denoiser.W3 = read_tensor(in, "denoiser_W3");
    state.denoiser.b1 = read_tensor(in, "denoiser_b1");
    state.denoiser.b2 = read_tensor(in, "denoiser_b2");
    state.denoiser.b3 = read_tensor(in, "denoiser_b3");
    state.head.W_mu = read_tensor(in, "head_W_mu");
    state.head.W_sigma = read_tensor(in, "head_W_sigma");
    state.kge.relation_embeddings = read_tensor(in, "rel_embeddings");
    state.kge.model_kind = state.config.kge;
    state.kge.margin = state.config.margin;

    std::string end_tag;
    std::getline(in, end_tag);  // consume newline after last tensor
    std::getline(in, end_tag);
    if (end_tag != kEnd)
        throw std::runtime_error("checkpoint integrity error: missing end marker");
    return state;
}

}  // namespace mulcanon
