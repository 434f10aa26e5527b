#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mulcanon/checkpoint.hpp"
#include "mulcanon/runner.hpp"
#include "mulcanon/unlearn.hpp"

namespace py = pybind11;
using namespace mulcanon;

PYBIND11_MODULE(_mulcanon, m) {
    m.doc() = "Open-KB canonicalization with diffusion-based unlearning";

    py::enum_<PhraseKind>(m, "PhraseKind")
        .value("NP", PhraseKind::NP)
        .value("RP", PhraseKind::RP);
    py::enum_<DatasetFormat>(m, "DatasetFormat")
        .value("ReverbStyle", DatasetFormat::ReverbStyle)
        .value("CanonicnellStyle", DatasetFormat::CanonicnellStyle)
        .value("Synthetic", DatasetFormat::Synthetic);
    py::enum_<Linkage>(m, "Linkage")
        .value("Complete", Linkage::Complete)
        .value("Average", Linkage::Average)
        .value("Single", Linkage::Single);
    py::enum_<HacDistance>(m, "HacDistance")
        .value("Cosine", HacDistance::Cosine)
        .value("Euclidean", HacDistance::Euclidean);
    py::enum_<OovPolicy>(m, "OovPolicy")
        .value("Zero", OovPolicy::Zero)
        .value("SeededRandom", OovPolicy::SeededRandom);
    py::enum_<KgeKind>(m, "KgeKind")
        .value("TransE", KgeKind::TransE)
        .value("HolE", KgeKind::HolE);
    py::enum_<EvalSubset>(m, "EvalSubset")
        .value("Forget", EvalSubset::Forget)
        .value("Test", EvalSubset::Test);

    py::class_<Phrase>(m, "Phrase")
        .def_readonly("id", &Phrase::id)
        .def_readonly("surface", &Phrase::surface)
        .def_readonly("tokens", &Phrase::tokens)
        .def_readonly("kind", &Phrase::kind);

    py::class_<OpenTriple>(m, "OpenTriple")
        .def_readonly("id", &OpenTriple::id)
        .def_readonly("head", &OpenTriple::head)
        .def_readonly("rel", &OpenTriple::rel)
        .def_readonly("tail", &OpenTriple::tail)
        .def_readonly("gold_head", &OpenTriple::gold_head)
        .def_readonly("gold_tail", &OpenTriple::gold_tail);

    py::class_<OkbDataset>(m, "OkbDataset")
        .def_readonly("nps", &OkbDataset::nps)
        .def_readonly("rps", &OkbDataset::rps)
        .def_readonly("triples", &OkbDataset::triples)
        .def_readonly("gold_clusters", &OkbDataset::gold_clusters);

    py::class_<ForgetSpec>(m, "ForgetSpec")
        .def_readonly("proportion", &ForgetSpec::proportion)
        .def_readonly("forget_triples", &ForgetSpec::forget_triples)
        .def_readonly("retained_triples", &ForgetSpec::retained_triples);

    py::class_<EmbeddingStore>(m, "EmbeddingStore")
        .def_readonly("dim", &EmbeddingStore::dim)
        .def_readonly("np_vectors", &EmbeddingStore::np_vectors)
        .def_readonly("rp_vectors", &EmbeddingStore::rp_vectors)
        .def_readonly("oov_tokens", &EmbeddingStore::oov_tokens)
        .def_readonly("total_tokens", &EmbeddingStore::total_tokens);

    py::class_<WordVectorTable>(m, "WordVectorTable")
        .def_readonly("dim", &WordVectorTable::dim);

    py::class_<InitialClustering>(m, "InitialClustering")
        .def_readonly("labels", &InitialClustering::labels)
        .def_readonly("clusters", &InitialClustering::clusters)
        .def_readonly("k", &InitialClustering::k);

    py::class_<Prf>(m, "Prf")
        .def_readonly("precision", &Prf::precision)
        .def_readonly("recall", &Prf::recall)
        .def_readonly("f1", &Prf::f1);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("macro", &EvalReport::macro)
        .def_readonly("micro", &EvalReport::micro)
        .def_readonly("pair", &EvalReport::pair)
        .def_readonly("average_f1", &EvalReport::average_f1)
        .def_readonly("subset", &EvalReport::subset);

    py::class_<Clustering>(m, "Clustering")
        .def(py::init<>())
        .def_readwrite("clusters", &Clustering::clusters);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("lr_step1", &TrainConfig::lr_step1)
        .def_readwrite("lr_step2", &TrainConfig::lr_step2)
        .def_readwrite("epochs_per_step", &TrainConfig::epochs_per_step)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("negatives_k", &TrainConfig::negatives_k)
        .def_readwrite("T", &TrainConfig::T)
        .def_readwrite("noise_scale", &TrainConfig::noise_scale)
        .def_readwrite("np_threshold", &TrainConfig::np_threshold)
        .def_readwrite("rp_threshold", &TrainConfig::rp_threshold)
        .def_readwrite("idf_threshold", &TrainConfig::idf_threshold)
        .def_readwrite("kge", &TrainConfig::kge)
        .def_readwrite("linkage", &TrainConfig::linkage)
        .def_readwrite("distance", &TrainConfig::distance)
        .def_readwrite("oov", &TrainConfig::oov);

    py::class_<EpochLog>(m, "EpochLog")
        .def_readonly("epoch", &EpochLog::epoch)
        .def_readonly("step", &EpochLog::step)
        .def_readonly("l_clu", &EpochLog::l_clu)
        .def_readonly("l_diff", &EpochLog::l_diff)
        .def_readonly("l_side", &EpochLog::l_side)
        .def_readonly("l_kge", &EpochLog::l_kge)
        .def_readonly("total", &EpochLog::total);

    py::class_<ModelState>(m, "ModelState")
        .def_readonly("dim", &ModelState::dim)
        .def_readonly("fingerprint", &ModelState::fingerprint)
        .def_readonly("log", &ModelState::log)
        .def_readonly("step1_done", &ModelState::step1_done)
        .def_readonly("step2_done", &ModelState::step2_done)
        .def_readonly("regen_displacement_mean", &ModelState::regen_displacement_mean)
        .def_readonly("regen_count", &ModelState::regen_count)
        .def("param_count", &ModelState::param_count);

    py::class_<UnlearnReport>(m, "UnlearnReport")
        .def_readonly("raw_forget", &UnlearnReport::raw_forget)
        .def_readonly("raw_test", &UnlearnReport::raw_test)
        .def_readonly("retrained_forget", &UnlearnReport::retrained_forget)
        .def_readonly("retrained_test", &UnlearnReport::retrained_test)
        .def_readonly("unlearned_forget", &UnlearnReport::unlearned_forget)
        .def_readonly("unlearned_test", &UnlearnReport::unlearned_test)
        .def_readonly("regen_displacement_mean", &UnlearnReport::regen_displacement_mean)
        .def_readonly("regen_count", &UnlearnReport::regen_count);

    py::class_<SynthParams>(m, "SynthParams")
        .def(py::init<>())
        .def_readwrite("entities", &SynthParams::entities)
        .def_readwrite("aliases_per_entity", &SynthParams::aliases_per_entity)
        .def_readwrite("relations", &SynthParams::relations)
        .def_readwrite("triples", &SynthParams::triples)
        .def_readwrite("dim", &SynthParams::dim)
        .def_readwrite("noise", &SynthParams::noise)
        .def_readwrite("seed", &SynthParams::seed);

    m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("format"),
          py::arg("validation_fraction") = 0.0, py::arg("split_seed") = 0);
    m.def("split_forget", &split_forget);
    m.def("dataset_fingerprint", &dataset_fingerprint);
    m.def("tokenize", &tokenize);
    m.def("load_word_vectors", &load_word_vectors);
    m.def("build_store", &build_store);
    m.def("hac_cluster", &hac_cluster);
    m.def("pairwise_distance", &pairwise_distance);
    m.def(
        "train",
        [](const OkbDataset& dataset, const EmbeddingStore& store,
           const TrainConfig& config) { return train(dataset, store, config); },
        py::arg("dataset"), py::arg("store"), py::arg("config"));
    m.def("predict_assignments", &predict_assignments);
    m.def("infer_latent", &infer_latent);
    m.def(
        "evaluate",
        [](const ModelState& state, const OkbDataset& dataset, EvalSubset subset) {
            return evaluate(state, dataset, subset);
        },
        py::arg("state"), py::arg("dataset"), py::arg("subset"));
    m.def(
        "unlearn",
        [](const ModelState& trained, const OkbDataset& dataset, const ForgetSpec& forget,
           std::uint64_t regen_seed) {
            UnlearnConfig cfg;
            cfg.forget = forget;
            cfg.regen_seed = regen_seed;
            cfg.retrain = trained.config;
            return unlearn(trained, dataset, cfg);
        },
        py::arg("trained"), py::arg("dataset"), py::arg("forget"),
        py::arg("regen_seed") = 0);
    m.def("retrain_baseline", &retrain_baseline);
    m.def("compare", &compare);
    m.def("macro_prf", &macro_prf);
    m.def("micro_prf", &micro_prf);
    m.def("pair_prf", &pair_prf);
    m.def("evaluate_clusterings", &evaluate_clusterings);
    m.def("generate_synthetic", &generate_synthetic);
    m.def("save_checkpoint", &save_checkpoint);
    m.def("load_checkpoint", &load_checkpoint);
}
