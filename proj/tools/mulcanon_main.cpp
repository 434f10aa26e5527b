#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include "mulcanon/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Open-knowledge-base canonicalization with diffusion-based unlearning"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "run", checkpoint_path;
    std::map<std::string, std::string> overrides;
    long seed = -1;
    double forget_proportion = -1.0;
    std::string kge_model;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", config_path, "key=value configuration file");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out_dir, "output run directory");
        cmd->add_option("--seed", seed, "global seed override");
        cmd->add_option("--forget-proportion", forget_proportion,
                        "forget-set proportion override");
        cmd->add_option("--kge", kge_model, "kge scorer override")
            ->check(CLI::IsMember({"transe", "hole"}));
    };

    auto* train = app.add_subcommand("train", "two-step training plus test evaluation");
    add_common(train, true);

    auto* unlearn = app.add_subcommand("unlearn", "regenerate forget embeddings and retrain");
    add_common(unlearn, true);
    unlearn->add_option("--checkpoint", checkpoint_path, "checkpoint from a train run")
        ->required()
        ->check(CLI::ExistingFile);

    auto* eval = app.add_subcommand("eval", "recompute metrics from a checkpoint");
    add_common(eval, true);
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint to evaluate")
        ->required()
        ->check(CLI::ExistingFile);

    auto* synth = app.add_subcommand("synth", "emit a planted-partition benchmark");
    mulcanon::SynthParams params;
    synth->add_option("--entities", params.entities);
    synth->add_option("--aliases", params.aliases_per_entity);
    synth->add_option("--relations", params.relations);
    synth->add_option("--triples", params.triples);
    synth->add_option("--dim", params.dim);
    synth->add_option("--noise", params.noise);
    synth->add_option("--seed", seed);
    synth->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    if (seed >= 0) overrides["seed"] = std::to_string(seed);
    if (forget_proportion >= 0.0)
        overrides["unlearn.proportion"] = std::to_string(forget_proportion);
    if (!kge_model.empty()) overrides["kge.model"] = kge_model;

    try {
        if (synth->parsed()) {
            if (seed >= 0) params.seed = static_cast<std::uint64_t>(seed);
            mulcanon::run_synth(params, out_dir);
            return 0;
        }
        mulcanon::RunConfig config = mulcanon::parse_run_config(config_path, overrides);
        if (train->parsed())
            mulcanon::run_train(config, out_dir);
        else if (unlearn->parsed())
            mulcanon::run_unlearn(config, checkpoint_path, out_dir);
        else if (eval->parsed())
            mulcanon::run_eval(config, checkpoint_path, out_dir);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error:invalid-argument:%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error:runtime:%s\n", e.what());
        return 1;
    }
}
