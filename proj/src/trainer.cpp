#include "mulcanon/trainer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mulcanon {

namespace {

void check_finite(double value, const char* component) {
    if (!std::isfinite(value))
        throw std::runtime_error(std::string("divergence in ") + component +
                                 ": loss is not finite");
}

struct FlatLayout {
    std::size_t np_mix = 0, rp_mix = 0, denoiser = 0, head = 0, rel = 0;
    std::size_t total() const { return np_mix + rp_mix + denoiser + head + rel; }
};

FlatLayout layout_of(const ModelState& s) {
    FlatLayout l;
    l.np_mix = s.np_mixture.param_count();
    l.rp_mix = s.rp_mixture.param_count();
    l.denoiser = s.denoiser.param_count();
    l.head = s.head.param_count();
    l.rel = static_cast<std::size_t>(s.kge.relation_embeddings.size());
    return l;
}

}  // namespace

std::size_t ModelState::param_count() const { return layout_of(*this).total(); }

std::vector<double> ModelState::to_flat() const {
    FlatLayout l = layout_of(*this);
    std::vector<double> flat(l.total());
    double* p = flat.data();
    np_mixture.to_flat(p);
    p += l.np_mix;
    rp_mixture.to_flat(p);
    p += l.rp_mix;
    denoiser.to_flat(p);
    p += l.denoiser;
    head.to_flat(p);
    p += l.head;
    std::copy(kge.relation_embeddings.data(),
              kge.relation_embeddings.data() + kge.relation_embeddings.size(), p);
    return flat;
}

void ModelState::from_flat(const std::vector<double>& flat) {
    FlatLayout l = layout_of(*this);
    if (flat.size() != l.total())
        throw std::invalid_argument("ModelState::from_flat: size mismatch");
    const double* p = flat.data();
    np_mixture.from_flat(p);
    p += l.np_mix;
    rp_mixture.from_flat(p);
    p += l.rp_mix;
    denoiser.from_flat(p);
    p += l.denoiser;
    head.from_flat(p);
    p += l.head;
    std::copy(p, p + kge.relation_embeddings.size(), kge.relation_embeddings.data());
}

namespace {

struct PhraseForward {
    Eigen::VectorXd x_T;
    Eigen::VectorXd z0;
    LatentSample latent;
    PosteriorCache cache;
    Eigen::VectorXd v;
    Eigen::VectorXd dv;  // accumulated dL/dv
    Eigen::VectorXd dw;  // accumulated dL/dw from the side objective
};

LossBreakdown compute_losses(const ModelState& state, const OkbDataset& dataset,
                             int step, std::mt19937_64& rng) {
    const TrainConfig& cfg = state.config;
    const int d = state.dim;
    const std::size_t n_np = dataset.nps.size();
    const std::size_t n_rp = dataset.rps.size();
    const double n_phrases = static_cast<double>(n_np + n_rp);
    if (n_np + n_rp == 0) throw std::invalid_argument("loss: empty dataset");

    FlatLayout l = layout_of(state);
    LossBreakdown out;
    out.grads.assign(l.total(), 0.0);

    GaussianMixtureGrad g_np = GaussianMixtureGrad::zero(state.np_mixture);
    GaussianMixtureGrad g_rp = GaussianMixtureGrad::zero(state.rp_mixture);
    DenoiserNetwork g_denoiser = DenoiserNetwork::zero(d);
    Eigen::MatrixXd g_wmu = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd g_wsigma = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd g_rel = Eigen::MatrixXd::Zero(state.kge.relation_embeddings.rows(),
                                                  state.kge.relation_embeddings.cols());

    // --- latent construction: noisy forward trajectory + reparametrized head ---
    std::vector<PhraseForward> np_fwd(n_np), rp_fwd(n_rp);
    auto run_forward = [&](const std::vector<Eigen::VectorXd>& x0s,
                           const GaussianMixture& mixture,
                           std::vector<PhraseForward>& fwd) {
        for (std::size_t i = 0; i < x0s.size(); ++i) {
            Eigen::VectorXd x = x0s[i];
            for (int t = 1; t <= state.schedule.T; ++t)
                x = forward_step(x, t, state.schedule, standard_normal(d, rng));
            fwd[i].x_T = x;
            fwd[i].z0 = standard_normal(d, rng);
            fwd[i].latent = reparam_sample(x, state.head, fwd[i].z0);
            fwd[i].v = posterior(fwd[i].latent.w, mixture, &fwd[i].cache);
            fwd[i].dv = Eigen::VectorXd::Zero(mixture.k);
            fwd[i].dw = Eigen::VectorXd::Zero(d);
        }
    };
    run_forward(state.store.np_vectors, state.np_mixture, np_fwd);
    run_forward(state.store.rp_vectors, state.rp_mixture, rp_fwd);

    // --- clustering loss against HAC weak labels (mean over all phrases) ---
    long clamped = 0;
    auto add_clu = [&](std::vector<PhraseForward>& fwd, const InitialClustering& clustering) {
        for (std::size_t i = 0; i < fwd.size(); ++i) {
            int target = clustering.labels[static_cast<int>(i)];
            double vt = fwd[i].v[target];
            if (vt < 1e-12) {
                vt = 1e-12;
                ++clamped;
            }
            out.l_clu += -std::log(vt) / n_phrases;
            fwd[i].dv[target] += cfg.coef_clu * (-1.0 / (vt * n_phrases));
        }
    };
    add_clu(np_fwd, state.np_clustering);
    add_clu(rp_fwd, state.rp_clustering);
    (void)clamped;
    check_finite(out.l_clu, "L_clu");

    // --- diffusion loss over all x0 ---
    {
        std::vector<Eigen::VectorXd> batch;
        batch.reserve(n_np + n_rp);
        for (const auto& v : state.store.np_vectors) batch.push_back(v);
        for (const auto& v : state.store.rp_vectors) batch.push_back(v);
        DiffusionLossResult diff = diffusion_loss(batch, state.schedule, state.denoiser, rng);
        out.l_diff = diff.loss;
        check_finite(out.l_diff, "L_diff");
        g_denoiser.add_scaled(diff.grad, cfg.coef_diff);
    }

    // --- side information loss on current latents ---
    auto add_side = [&](const SidePairSet& pairs, std::vector<PhraseForward>& fwd) {
        if (pairs.pairs.empty()) return;
        std::vector<Eigen::VectorXd> latents(fwd.size());
        for (std::size_t i = 0; i < fwd.size(); ++i) latents[i] = fwd[i].latent.w;
        SideLossResult side = side_loss(pairs, latents, cfg.side_coefficients);
        out.l_side += side.loss;
        for (const auto& [id, g] : side.grad_latents)
            fwd[static_cast<std::size_t>(id)].dw += cfg.coef_side * g;
    };
    add_side(state.np_pairs, np_fwd);
    add_side(state.rp_pairs, rp_fwd);
    check_finite(out.l_side, "L_side");

    // --- KGE loss (step two only) ---
    if (step == 2) {
        TripleBatch batch;
        std::set<int> eligible(state.kge_triples.begin(), state.kge_triples.end());
        for (const auto& t : dataset.triples) {
            if (!eligible.count(t.id)) continue;
            KgeTriple kt;
            kt.head = t.head;
            kt.tail = t.tail;
            kt.rel_cluster = state.rp_clustering.labels[t.rel];
            batch.positives.push_back(kt);
        }
        if (!batch.positives.empty() && n_np >= 2) {
            for (const auto& pos : batch.positives)
                batch.negatives.push_back(sample_negatives(
                    pos, static_cast<int>(n_np), cfg.negatives_k, rng));

            std::vector<Eigen::VectorXd> posteriors(n_np);
            for (std::size_t i = 0; i < n_np; ++i) posteriors[i] = np_fwd[i].v;
            KgeLossResult kge = kge_loss(batch, posteriors, state.np_mixture, state.kge);
            out.l_kge = kge.loss;
            check_finite(out.l_kge, "L_kge");
            g_rel += cfg.coef_kge * kge.grad_relations;
            g_np.means += cfg.coef_kge * kge.grad_means;
            for (std::size_t i = 0; i < n_np; ++i)
                np_fwd[i].dv += cfg.coef_kge * kge.grad_posteriors[i];
        }
    }

    // --- backprop posteriors and latents into mixtures and the reparam head ---
    auto backprop = [&](std::vector<PhraseForward>& fwd, const GaussianMixture& mixture,
                        GaussianMixtureGrad& g_mix) {
        for (auto& pf : fwd) {
            Eigen::VectorXd dw = pf.dw;
            if (pf.dv.any())
                dw += posterior_backward(pf.latent.w, mixture, pf.cache, pf.dv, g_mix);
            if (dw.isZero(0.0)) continue;
            // w = W_mu x_T + (W_sigma x_T) .* z0
            g_wmu += dw * pf.x_T.transpose();
            g_wsigma += dw.cwiseProduct(pf.z0) * pf.x_T.transpose();
        }
    };
    backprop(np_fwd, state.np_mixture, g_np);
    backprop(rp_fwd, state.rp_mixture, g_rp);

    // --- pack gradients in flat layout order ---
    double* p = out.grads.data();
    g_np.to_flat(p);
    p += l.np_mix;
    g_rp.to_flat(p);
    p += l.rp_mix;
    g_denoiser.to_flat(p);
    p += l.denoiser;
    std::copy(g_wmu.data(), g_wmu.data() + g_wmu.size(), p);
    p += g_wmu.size();
    std::copy(g_wsigma.data(), g_wsigma.data() + g_wsigma.size(), p);
    p += g_wsigma.size();
    std::copy(g_rel.data(), g_rel.data() + g_rel.size(), p);

    out.total = cfg.coef_clu * out.l_clu + cfg.coef_diff * out.l_diff +
                cfg.coef_side * out.l_side +
                (step == 2 ? cfg.coef_kge * out.l_kge : 0.0);
    return out;
}

}  // namespace

LossBreakdown loss_step_one(const ModelState& state, const OkbDataset& dataset,
                            std::mt19937_64& rng) {
    return compute_losses(state, dataset, 1, rng);
}

LossBreakdown loss_step_two(const ModelState& state, const OkbDataset& dataset,
                            std::mt19937_64& rng) {
    return compute_losses(state, dataset, 2, rng);
}

ModelState initialize_state(const OkbDataset& dataset, const EmbeddingStore& store,
                            const TrainConfig& config,
                            const SidePairSet& external_np_pairs,
                            const std::vector<int>* kge_triples) {
    if (dataset.nps.empty()) throw std::invalid_argument("dataset has no noun phrases");
    ModelState state;
    state.dim = store.dim;
    state.config = config;
    state.fingerprint = dataset_fingerprint(dataset);
    state.store = store;

    state.np_clustering =
        hac_cluster(store.np_vectors, config.linkage, config.distance, config.np_threshold);
    state.np_mixture = GaussianMixture::from_seed(
        seed_mixture(state.np_clustering, store.np_vectors, config.center, config.distance));
    if (!store.rp_vectors.empty()) {
        state.rp_clustering = hac_cluster(store.rp_vectors, config.linkage, config.distance,
                                          config.rp_threshold);
        state.rp_mixture = GaussianMixture::from_seed(seed_mixture(
            state.rp_clustering, store.rp_vectors, config.center, config.distance));
    }

    state.schedule = NoiseSchedule::linear(config.T, config.beta_start, config.beta_end);
    std::mt19937_64 init_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    state.denoiser = DenoiserNetwork::init(store.dim, init_rng);
    state.head = ReparamHead::init(store.dim, init_rng);
    state.kge = KgeParameters::init(std::max(state.rp_clustering.k, 1), store.dim,
                                    config.kge, config.margin, init_rng);

    TokenFrequencies freqs = token_frequencies(dataset);
    if (config.use_idf_pairs) {
        for (const auto& p :
             idf_overlap_pairs(dataset, freqs, config.idf_threshold, PhraseKind::NP).pairs)
            state.np_pairs.add(p);
        for (const auto& p :
             idf_overlap_pairs(dataset, freqs, config.idf_threshold, PhraseKind::RP).pairs)
            state.rp_pairs.add(p);
    }
    if (config.use_morph_pairs) {
        for (const auto& p : morph_pairs(dataset, PhraseKind::NP).pairs) state.np_pairs.add(p);
        for (const auto& p : morph_pairs(dataset, PhraseKind::RP).pairs) state.rp_pairs.add(p);
    }
    for (const auto& p : external_np_pairs.pairs) state.np_pairs.add(p);

    if (kge_triples) {
        state.kge_triples = *kge_triples;
    } else {
        for (const auto& t : dataset.triples) state.kge_triples.push_back(t.id);
    }
    return state;
}

ModelState train(const OkbDataset& dataset, const EmbeddingStore& store,
                 const TrainConfig& config, const SidePairSet& external_np_pairs,
                 const std::vector<int>* kge_triples) {
    ModelState state = initialize_state(dataset, store, config, external_np_pairs, kge_triples);
    std::mt19937_64 rng(config.seed);

    std::vector<double> params = state.to_flat();
    for (int step = 1; step <= 2; ++step) {
        Optimizer opt(config.optimizer, params.size(),
                      step == 1 ? config.lr_step1 : config.lr_step2);
        for (int epoch = 0; epoch < config.epochs_per_step; ++epoch) {
            LossBreakdown losses = step == 1 ? loss_step_one(state, dataset, rng)
                                             : loss_step_two(state, dataset, rng);
            opt.step(params, losses.grads);
            state.from_flat(params);
            state.log.push_back({epoch, step, losses.l_clu, losses.l_diff, losses.l_side,
                                 losses.l_kge, losses.total});
        }
        if (step == 1)
            state.step1_done = true;
        else
            state.step2_done = true;
    }
    return state;
}

Eigen::VectorXd infer_latent(const ModelState& state, const Eigen::VectorXd& x0) {
    Eigen::VectorXd x = x0;
    for (int t = 1; t <= state.schedule.T; ++t)
        x *= std::sqrt(state.schedule.alphas[t - 1]);
    return state.head.W_mu * x;
}

Eigen::VectorXd infer_posterior(const ModelState& state, PhraseKind kind, int phrase_id) {
    const auto& vectors = state.store.vectors(kind);
    const GaussianMixture& mixture =
        kind == PhraseKind::NP ? state.np_mixture : state.rp_mixture;
    return posterior(infer_latent(state, vectors.at(phrase_id)), mixture);
}

std::vector<int> predict_assignments(const ModelState& state, PhraseKind kind) {
    const auto& vectors = state.store.vectors(kind);
    std::vector<int> out(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i)
        out[i] = hard_assign(infer_posterior(state, kind, static_cast<int>(i)));
    return out;
}

EvalReport evaluate(const ModelState& state, const OkbDataset& dataset, EvalSubset subset,
                    const std::set<int>* forget_triples) {
    if (!state.step1_done) throw std::runtime_error("evaluate: model is untrained");

    std::set<int> np_subset;
    if (subset == EvalSubset::Forget) {
        if (!forget_triples)
            throw std::invalid_argument("evaluate: forget subset needs a forget spec");
        for (int np : nps_of_triples(dataset, *forget_triples)) np_subset.insert(np);
    }

    // gold-linked NPs only; forget restricts further to forget-triple NPs
    std::map<int, std::string> gold_of;
    for (const auto& [gold, members] : dataset.gold_clusters)
        for (int np : members) gold_of[np] = gold;

    std::vector<int> assignments = predict_assignments(state, PhraseKind::NP);

    std::map<int, std::vector<int>> pred_groups;
    std::map<std::string, std::vector<int>> gold_groups;
    for (const auto& [np, gold] : gold_of) {
        if (subset == EvalSubset::Forget && !np_subset.count(np)) continue;
        pred_groups[assignments[np]].push_back(np);
        gold_groups[gold].push_back(np);
    }
    if (pred_groups.empty())
        throw std::runtime_error("evaluate: subset contains no gold-linked NP");

    Clustering predicted, gold;
    for (auto& [_, members] : pred_groups) predicted.clusters.push_back(members);
    for (auto& [_, members] : gold_groups) gold.clusters.push_back(members);
    return evaluate_clusterings(predicted, gold,
                                subset == EvalSubset::Forget ? "forget" : "test");
}

std::string format_training_log(const std::vector<EpochLog>& log) {
    std::ostringstream out;
    out.precision(10);
    out << "epoch\tstep\tL_clu\tL_diff\tL_side\tL_kge\ttotal\n";
    for (const auto& e : log)
        out << e.epoch << '\t' << e.step << '\t' << e.l_clu << '\t' << e.l_diff << '\t'
            << e.l_side << '\t' << e.l_kge << '\t' << e.total << '\n';
    return out.str();
}

}  // namespace mulcanon
