#pragma once

#include "mulcanon/dataset.hpp"
#include "mulcanon/metrics.hpp"
#include "mulcanon/trainer.hpp"

namespace mulcanon {

struct UnlearnConfig {
    ForgetSpec forget;
    std::uint64_t regen_seed = 0;
    TrainConfig retrain;  // configuration for the post-regeneration retraining
};

struct UnlearnReport {
    EvalReport raw_forget, raw_test;
    EvalReport retrained_forget, retrained_test;
    EvalReport unlearned_forget, unlearned_test;
    double regen_displacement_mean = 0.0;
    long regen_count = 0;
};

/// Re-noises every phrase occurring in a forget triple through the trained
/// diffusion stack, swaps the regenerated vectors into a fresh store, and
/// re-runs the full two-step training on it (HAC re-seeds from the new
/// embeddings). The input state is left untouched.
ModelState unlearn(const ModelState& trained, const OkbDataset& dataset,
                   const UnlearnConfig& config);

/// Deletion-plus-retraining baseline: trains with the KGE objective
/// restricted to retained triples. Phrases stay clusterable either way.
ModelState retrain_baseline(const OkbDataset& dataset, const EmbeddingStore& store,
                            const ForgetSpec& forget, const TrainConfig& config);

UnlearnReport compare(const ModelState& raw, const ModelState& retrained,
                      const ModelState& unlearned, const OkbDataset& dataset,
                      const ForgetSpec& forget);

std::string format_unlearn_report(const UnlearnReport& report);

}  // namespace mulcanon
