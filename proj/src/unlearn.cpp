#include "mulcanon/unlearn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mulcanon {

ModelState unlearn(const ModelState& trained, const OkbDataset& dataset,
                   const UnlearnConfig& config) {
    if (!trained.step1_done || !trained.step2_done)
        throw std::runtime_error("unlearn: input state is not fully trained");
    if (trained.fingerprint != dataset_fingerprint(dataset))
        throw std::runtime_error("unlearn: dataset fingerprint mismatch");

    EmbeddingStore store = trained.store;  // regeneration writes a new store
    double displacement = 0.0;
    long count = 0;

    auto regen_phrase = [&](PhraseKind kind, int id) {
        auto& vectors = store.vectors(kind);
        const Eigen::VectorXd& x0 = vectors.at(id);
        // per-phrase seeded noise stream
        std::uint64_t stream = config.regen_seed ^
                               (static_cast<std::uint64_t>(kind == PhraseKind::RP) << 32) ^
                               (static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ull + 1);
        std::mt19937_64 rng(stream);
        RegenerationResult r = regenerate(x0, trained.schedule, trained.head,
                                          trained.denoiser, rng,
                                          trained.config.noise_scale);
        displacement += (r.x_hat0 - x0).norm();
        ++count;
        vectors[id] = r.x_hat0;
    };

    for (int np : nps_of_triples(dataset, config.forget.forget_triples))
        regen_phrase(PhraseKind::NP, np);
    for (int rp : rps_of_triples(dataset, config.forget.forget_triples))
        regen_phrase(PhraseKind::RP, rp);

    ModelState unlearned = train(dataset, store, config.retrain);
    unlearned.regen_displacement_mean = count > 0 ? displacement / count : 0.0;
    unlearned.regen_count = count;
    return unlearned;
}

ModelState retrain_baseline(const OkbDataset& dataset, const EmbeddingStore& store,
                            const ForgetSpec& forget, const TrainConfig& config) {
    if (forget.retained_triples.empty())
        throw std::invalid_argument("retrain_baseline: retained set is empty");
    std::vector<int> retained(forget.retained_triples.begin(),
                              forget.retained_triples.end());
    return train(dataset, store, config, {}, &retained);
}

UnlearnReport compare(const ModelState& raw, const ModelState& retrained,
                      const ModelState& unlearned, const OkbDataset& dataset,
                      const ForgetSpec& forget) {
    std::uint64_t fp = dataset_fingerprint(dataset);
    for (const ModelState* s : {&raw, &retrained, &unlearned})
        if (s->fingerprint != fp)
            throw std::runtime_error("compare: dataset fingerprint mismatch");

    UnlearnReport report;
    report.raw_forget = evaluate(raw, dataset, EvalSubset::Forget, &forget.forget_triples);
    report.raw_test = evaluate(raw, dataset, EvalSubset::Test);
    report.retrained_forget =
        evaluate(retrained, dataset, EvalSubset::Forget, &forget.forget_triples);
    report.retrained_test = evaluate(retrained, dataset, EvalSubset::Test);
    report.unlearned_forget =
        evaluate(unlearned, dataset, EvalSubset::Forget, &forget.forget_triples);
    report.unlearned_test = evaluate(unlearned, dataset, EvalSubset::Test);
    report.regen_displacement_mean = unlearned.regen_displacement_mean;
    report.regen_count = unlearned.regen_count;
    return report;
}

std::string format_unlearn_report(const UnlearnReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "metric\traw_forget\traw_test\tretrained_forget\tretrained_test\t"
           "unlearned_forget\tunlearned_test\n";
    auto row = [&](const char* name, auto pick) {
        out << name << '\t' << pick(report.raw_forget) << '\t' << pick(report.raw_test)
            << '\t' << pick(report.retrained_forget) << '\t' << pick(report.retrained_test)
            << '\t' << pick(report.unlearned_forget) << '\t' << pick(report.unlearned_test)
            << '\n';
    };
    row("macro_f1", [](const EvalReport& r) { return r.macro.f1; });
    row("micro_f1", [](const EvalReport& r) { return r.micro.f1; });
    row("pair_f1", [](const EvalReport& r) { return r.pair.f1; });
    row("average_f1", [](const EvalReport& r) { return r.average_f1; });
    out << "regen_displacement_mean\t" << report.regen_displacement_mean << '\n';
    out << "regen_count\t" << report.regen_count << '\n';
    return out.str();
}

}  // namespace mulcanon
