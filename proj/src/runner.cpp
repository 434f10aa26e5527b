#include "mulcanon/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mulcanon/checkpoint.hpp"
#include "mulcanon/unlearn.hpp"

namespace mulcanon {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct LoadedRun {
    OkbDataset dataset;
    EmbeddingStore store;
    SidePairSet external_pairs;
};

LoadedRun load_inputs(const RunConfig& config) {
    LoadedRun run;
    run.dataset = load_dataset(config.triples_path, config.format,
                               config.validation_fraction, config.train.seed);
    WordVectorTable table = load_word_vectors(config.vectors_path, config.dim);
    run.store = build_store(run.dataset, table, config.train.oov);
    if (!config.ppdb_path.empty())
        for (const auto& p :
             load_external_pairs(config.ppdb_path, SideSource::Ppdb, run.dataset).pairs)
            run.external_pairs.add(p);
    if (!config.entity_link_path.empty())
        for (const auto& p : load_external_pairs(config.entity_link_path,
                                                 SideSource::EntityLink, run.dataset).pairs)
            run.external_pairs.add(p);
    return run;
}

void write_manifest(const fs::path& dir, const OkbDataset& dataset) {
    std::ostringstream out;
    out << "fingerprint\t" << dataset_fingerprint(dataset) << '\n';
    out << "triples\t" << dataset.triples.size() << '\n';
    out << "nps\t" << dataset.nps.size() << '\n';
    out << "rps\t" << dataset.rps.size() << '\n';
    out << "gold_entities\t" << dataset.gold_clusters.size() << '\n';
    write_file(dir / "manifest.tsv", out.str());
}

}  // namespace

void run_train(const RunConfig& config, const std::string& out_dir) {
    LoadedRun run = load_inputs(config);
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    write_file(dir / "config.snapshot", serialize_run_config(config));
    write_manifest(dir, run.dataset);

    ModelState state = train(run.dataset, run.store, config.train, run.external_pairs);
    save_checkpoint(state, (dir / "checkpoint.txt").string());
    write_file(dir / "train_log.tsv", format_training_log(state.log));
    EvalReport report = evaluate(state, run.dataset, EvalSubset::Test);
    write_file(dir / "report.tsv", format_report(report));
}

void run_unlearn(const RunConfig& config, const std::string& checkpoint_path,
                 const std::string& out_dir) {
    LoadedRun run = load_inputs(config);
    ModelState raw = load_checkpoint(checkpoint_path);
    if (raw.fingerprint != dataset_fingerprint(run.dataset))
        throw std::runtime_error("checkpoint/dataset fingerprint mismatch");

    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    write_file(dir / "config.snapshot", serialize_run_config(config));
    write_manifest(dir, run.dataset);

    std::vector<double> proportions = config.forget_sweep;
    if (proportions.empty()) proportions.push_back(config.forget_proportion);

    for (double proportion : proportions) {
        ForgetSpec forget = split_forget(run.dataset, proportion, config.forget_seed);

        UnlearnConfig ucfg;
        ucfg.forget = forget;
        ucfg.regen_seed = config.regen_seed;
        ucfg.retrain = raw.config;
        ModelState unlearned = unlearn(raw, run.dataset, ucfg);
        ModelState retrained =
            retrain_baseline(run.dataset, raw.store, forget, raw.config);

        UnlearnReport report = compare(raw, retrained, unlearned, run.dataset, forget);

        std::ostringstream tag;
        tag << "p" << static_cast<int>(proportion * 1000.0 + 0.5);
        write_file(dir / ("unlearn_grid_" + tag.str() + ".tsv"),
                   format_unlearn_report(report));
        if (proportions.size() == 1) {
            save_checkpoint(unlearned, (dir / "unlearned_checkpoint.txt").string());
            write_file(dir / "unlearn_grid.tsv", format_unlearn_report(report));
        }
    }
}

void run_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& out_dir) {
    LoadedRun run = load_inputs(config);
    ModelState state = load_checkpoint(checkpoint_path);
    if (state.fingerprint != dataset_fingerprint(run.dataset))
        throw std::runtime_error("checkpoint/dataset fingerprint mismatch");

    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    write_file(dir / "config.snapshot", serialize_run_config(config));
    write_manifest(dir, run.dataset);

    EvalReport report;
    if (config.eval_subset == "forget") {
        ForgetSpec forget =
            split_forget(run.dataset, config.forget_proportion, config.forget_seed);
        report = evaluate(state, run.dataset, EvalSubset::Forget, &forget.forget_triples);
    } else {
        report = evaluate(state, run.dataset, EvalSubset::Test);
    }
    write_file(dir / "report.tsv", format_report(report));
}

void run_synth(const SynthParams& params, const std::string& out_dir) {
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    generate_synthetic(params, (dir / "triples.tsv").string(),
                       (dir / "vectors.txt").string());
    std::ostringstream manifest;
    manifest << "entities\t" << params.entities << '\n'
             << "aliases_per_entity\t" << params.aliases_per_entity << '\n'
             << "relations\t" << params.relations << '\n'
             << "triples\t" << params.triples << '\n'
             << "dim\t" << params.dim << '\n'
             << "noise\t" << params.noise << '\n'
             << "seed\t" << params.seed << '\n';
    write_file(dir / "synth_manifest.tsv", manifest.str());
}

}  // namespace mulcanon
