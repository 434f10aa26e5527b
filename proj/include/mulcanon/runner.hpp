#pragma once

#include <string>

#include "mulcanon/config.hpp"
#include "mulcanon/synth.hpp"

namespace mulcanon {

/// Command implementations behind the CLI. Every command writes its outputs
/// into `out_dir` (created if missing) with a config snapshot and a manifest
/// carrying the dataset fingerprint; outputs are byte-reproducible for a
/// fixed config and seed.
void run_train(const RunConfig& config, const std::string& out_dir);

void run_unlearn(const RunConfig& config, const std::string& checkpoint_path,
                 const std::string& out_dir);

void run_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& out_dir);

void run_synth(const SynthParams& params, const std::string& out_dir);

}  // namespace mulcanon
