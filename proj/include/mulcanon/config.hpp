#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mulcanon/dataset.hpp"
#include "mulcanon/trainer.hpp"

namespace mulcanon {

/// Flat key=value run configuration with section prefixes (e.g.
/// hac.np_threshold). Unknown keys are rejected; referenced input paths must
/// exist at parse time.
struct RunConfig {
    std::string triples_path;
    std::string vectors_path;
    DatasetFormat format = DatasetFormat::Synthetic;
    int dim = 16;
    double validation_fraction = 0.0;

    TrainConfig train;

    std::string ppdb_path;         // optional precomputed pair files
    std::string entity_link_path;

    double forget_proportion = 0.03;
    std::uint64_t forget_seed = 0;
    std::uint64_t regen_seed = 0;
    std::vector<double> forget_sweep;  // optional list of proportions

    std::string eval_subset = "test";

    std::map<std::string, std::string> raw;  // parsed key -> value snapshot
};

RunConfig parse_run_config(const std::string& path,
                           const std::map<std::string, std::string>& overrides = {});

/// Re-serialization of the effective configuration, diffable and reloadable.
std::string serialize_run_config(const RunConfig& config);

std::map<std::string, std::string> train_config_to_kv(const TrainConfig& config);
TrainConfig train_config_from_kv(const std::map<std::string, std::string>& kv);

}  // namespace mulcanon
