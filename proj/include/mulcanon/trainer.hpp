#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mulcanon/assignment.hpp"
#include "mulcanon/dataset.hpp"
#include "mulcanon/diffusion.hpp"
#include "mulcanon/embedding.hpp"
#include "mulcanon/hac.hpp"
#include "mulcanon/kge.hpp"
#include "mulcanon/metrics.hpp"
#include "mulcanon/optim.hpp"
#include "mulcanon/sideinfo.hpp"

namespace mulcanon {

struct TrainConfig {
    double lr_step1 = 1e-3;
    double lr_step2 = 1e-5;
    int epochs_per_step = 50;
    std::uint64_t seed = 0;
    int negatives_k = 20;
    OptimizerKind optimizer = OptimizerKind::Adam;

    double coef_clu = 1.0;
    double coef_diff = 1.0;
    double coef_side = 1.0;
    double coef_kge = 1.0;
    std::map<SideSource, double> side_coefficients;  // default 1.0 per source

    int T = 2;
    double beta_start = 1e-4;
    double beta_end = 0.02;
    double noise_scale = 1.0;  // additive reverse-step noise multiplier

    Linkage linkage = Linkage::Complete;
    HacDistance distance = HacDistance::Cosine;
    CenterRule center = CenterRule::Centroid;
    double np_threshold = 0.3;
    double rp_threshold = 0.3;

    KgeKind kge = KgeKind::TransE;
    double margin = 1.0;

    OovPolicy oov = OovPolicy::Zero;
    double idf_threshold = 0.5;
    bool use_idf_pairs = true;
    bool use_morph_pairs = true;
};

struct EpochLog {
    int epoch = 0;
    int step = 0;  // 1 or 2
    double l_clu = 0.0, l_diff = 0.0, l_side = 0.0, l_kge = 0.0, total = 0.0;
};

struct ModelState {
    int dim = 0;
    TrainConfig config;
    std::uint64_t fingerprint = 0;

    EmbeddingStore store;
    InitialClustering np_clustering, rp_clustering;
    GaussianMixture np_mixture, rp_mixture;
    NoiseSchedule schedule;
    DenoiserNetwork denoiser;
    ReparamHead head;
    KgeParameters kge;
    SidePairSet np_pairs, rp_pairs;
    std::vector<int> kge_triples;  // triple ids scored by the KGE objective

    std::vector<EpochLog> log;
    bool step1_done = false;
    bool step2_done = false;
    double regen_displacement_mean = 0.0;  // set by the unlearning procedure
    long regen_count = 0;

    std::size_t param_count() const;
    std::vector<double> to_flat() const;
    void from_flat(const std::vector<double>& flat);
};

struct LossBreakdown {
    double l_clu = 0.0, l_diff = 0.0, l_side = 0.0, l_kge = 0.0, total = 0.0;
    std::vector<double> grads;  // aligned with ModelState::to_flat
};

/// Step-one objective: coefficient-weighted L_clu + L_diff + L_side.
LossBreakdown loss_step_one(const ModelState& state, const OkbDataset& dataset,
                            std::mt19937_64& rng);

/// Step-two objective: step one plus the KGE term.
LossBreakdown loss_step_two(const ModelState& state, const OkbDataset& dataset,
                            std::mt19937_64& rng);

/// Initializes the pipeline (HAC seeds, diffusion stack, side pairs) without
/// running any optimization epochs.
ModelState initialize_state(const OkbDataset& dataset, const EmbeddingStore& store,
                            const TrainConfig& config,
                            const SidePairSet& external_np_pairs = {},
                            const std::vector<int>* kge_triples = nullptr);

/// Full two-step training: step-one epochs at lr_step1, then step-two epochs
/// at lr_step2. Deterministic for a fixed config seed.
ModelState train(const OkbDataset& dataset, const EmbeddingStore& store,
                 const TrainConfig& config, const SidePairSet& external_np_pairs = {},
                 const std::vector<int>* kge_triples = nullptr);

/// Deterministic latent for inference: noise-free forward pass then the mu
/// head (all noise draws zeroed).
Eigen::VectorXd infer_latent(const ModelState& state, const Eigen::VectorXd& x0);

Eigen::VectorXd infer_posterior(const ModelState& state, PhraseKind kind, int phrase_id);

/// Hard cluster assignment for every phrase of the kind.
std::vector<int> predict_assignments(const ModelState& state, PhraseKind kind);

enum class EvalSubset { Forget, Test };

EvalReport evaluate(const ModelState& state, const OkbDataset& dataset, EvalSubset subset,
                    const std::set<int>* forget_triples = nullptr);

std::string format_training_log(const std::vector<EpochLog>& log);

}  // namespace mulcanon
