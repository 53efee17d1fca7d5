#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repvec/repvec.hpp"

namespace py = pybind11;
using namespace repvec;

namespace {

template <class Fn>
std::string to_text(Fn&& fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Representative vectors for ontology classes from instance word embeddings.";

    py::register_exception<Error>(m, "RepvecError", PyExc_RuntimeError);

    // embeddings
    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_property_readonly("dimension", &EmbeddingTable::dimension)
        .def_property_readonly("vocab_size", &EmbeddingTable::vocab_size)
        .def_property_readonly("duplicate_count", &EmbeddingTable::duplicate_count)
        .def_property_readonly("tokens", &EmbeddingTable::tokens)
        .def("lookup",
             [](const EmbeddingTable& t, const std::string& token) -> std::optional<Vector> {
                 if (auto v = t.lookup(token)) {
                     return Vector(v->begin(), v->end());
                 }
                 return std::nullopt;
             })
        .def("__len__", &EmbeddingTable::vocab_size)
        .def("__contains__", &EmbeddingTable::contains);

    m.def("load_embeddings", [](const std::string& text) {
        std::istringstream in(text);
        return load_embeddings(in);
    }, py::arg("text"), "Parse word2vec text format from a string.");
    m.def("load_embeddings_file", &load_embeddings_file, py::arg("path"));
    m.def("save_embeddings", [](const EmbeddingTable& t) {
        return to_text([&](std::ostream& o) { save_embeddings(o, t); });
    });
    m.def("embed_phrase", &embed_phrase, py::arg("table"), py::arg("phrase"));

    // ontology
    py::class_<OntologyClass>(m, "OntologyClass")
        .def(py::init<>())
        .def(py::init([](std::string label, std::vector<std::string> instances) {
            return OntologyClass{std::move(label), std::move(instances)};
        }), py::arg("label"), py::arg("instances"))
        .def_readwrite("label", &OntologyClass::label)
        .def_readwrite("instances", &OntologyClass::instances);

    py::class_<ResolvedClass>(m, "ResolvedClass")
        .def_readonly("label", &ResolvedClass::label)
        .def_readonly("c0", &ResolvedClass::c0)
        .def_readonly("instance_vectors", &ResolvedClass::instance_vectors)
        .def_readonly("resolved_instances", &ResolvedClass::resolved_instances)
        .def_readonly("dropped_instances", &ResolvedClass::dropped_instances);

    m.def("load_ontology", [](const std::string& text) {
        std::istringstream in(text);
        return load_ontology(in);
    }, py::arg("text"));
    m.def("load_ontology_file", &load_ontology_file, py::arg("path"));
    m.def("save_ontology", [](const std::vector<OntologyClass>& cs) {
        return to_text([&](std::ostream& o) { save_ontology(o, cs); });
    });
    m.def("resolve_class", &resolve_class, py::arg("cls"), py::arg("table"));

    // subclustering
    py::class_<KMeansConfig>(m, "KMeansConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &KMeansConfig::max_iters)
        .def_readwrite("tol", &KMeansConfig::tol)
        .def_readwrite("seed", &KMeansConfig::seed)
        .def_readwrite("restarts", &KMeansConfig::restarts);

    py::class_<SubClustering>(m, "SubClustering")
        .def_readonly("assignment", &SubClustering::assignment)
        .def_readonly("mean0", &SubClustering::mean0)
        .def_readonly("mean1", &SubClustering::mean1)
        .def_readonly("objective", &SubClustering::objective)
        .def_readonly("iterations", &SubClustering::iterations)
        .def_readonly("degenerate", &SubClustering::degenerate);

    m.def("kmeans2", [](const std::vector<Vector>& xs, const KMeansConfig& cfg) { return kmeans2(xs, cfg); },
          py::arg("vectors"), py::arg("config") = KMeansConfig{});

    // svm
    py::class_<SvmConfig>(m, "SvmConfig")
        .def(py::init<>())
        .def_readwrite("C", &SvmConfig::C)
        .def_readwrite("kkt_tol", &SvmConfig::kkt_tol)
        .def_readwrite("support_eps", &SvmConfig::support_eps)
        .def_readwrite("max_passes", &SvmConfig::max_passes)
        .def_readwrite("seed", &SvmConfig::seed);

    py::class_<SvmModel>(m, "SvmModel")
        .def_readonly("w", &SvmModel::w)
        .def_readonly("b", &SvmModel::b)
        .def_readonly("alphas", &SvmModel::alphas)
        .def_readonly("support_mask", &SvmModel::support_mask)
        .def_readonly("fallback_all", &SvmModel::fallback_all)
        .def_readonly("converged", &SvmModel::converged)
        .def_readonly("max_kkt_violation", &SvmModel::max_kkt_violation)
        .def("decision", [](const SvmModel& s, const Vector& x) { return s.decision(x); });

    m.def("train_linear_svm",
          [](const std::vector<Vector>& pos, const std::vector<Vector>& neg, const SvmConfig& cfg) {
              return train_linear_svm(pos, neg, cfg);
          },
          py::arg("pos"), py::arg("neg"), py::arg("config") = SvmConfig{});
    m.def("support_membership", &support_membership, py::arg("model"), py::arg("n_total"));

    // candidates
    m.def("weighted_average",
          [](const std::vector<Vector>& xs, const std::vector<int>& a) { return weighted_average(xs, a); },
          py::arg("vectors"), py::arg("membership"));
    m.def("median_vector", [](const std::vector<Vector>& xs) { return median_vector(xs); });
    m.def("median_index", [](const std::vector<Vector>& xs) { return median_index(xs); });

    py::class_<CandidateSet>(m, "CandidateSet")
        .def_readonly("c1", &CandidateSet::c1)
        .def_readonly("c2", &CandidateSet::c2)
        .def_readonly("c3", &CandidateSet::c3)
        .def_readonly("c4", &CandidateSet::c4)
        .def_readonly("c5", &CandidateSet::c5);

    py::class_<CandidateMatrix>(m, "CandidateMatrix")
        .def_property_readonly("rows", &CandidateMatrix::rows)
        .def("row", &CandidateMatrix::row)
        .def("column", &CandidateMatrix::column);

    m.def("assemble_matrix", &assemble_matrix, py::arg("candidates"), py::arg("dimension"));

    // weights
    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("batch", &TrainConfig::batch)
        .def_readwrite("allow_negative", &TrainConfig::allow_negative);

    py::class_<TrainingMeta>(m, "TrainingMeta")
        .def_readonly("epochs", &TrainingMeta::epochs)
        .def_readonly("final_loss", &TrainingMeta::final_loss)
        .def_readonly("initial_loss", &TrainingMeta::initial_loss)
        .def_readonly("examples", &TrainingMeta::examples)
        .def_readonly("loss_history", &TrainingMeta::loss_history);

    py::class_<WeightVector>(m, "WeightVector")
        .def(py::init<>())
        .def_readwrite("w", &WeightVector::w)
        .def_readonly("meta", &WeightVector::meta);

    py::class_<WeightDataset>(m, "WeightDataset")
        .def_readonly("inputs", &WeightDataset::inputs)
        .def_readonly("targets", &WeightDataset::targets)
        .def("__len__", &WeightDataset::size);

    m.def("make_dataset", [](const std::vector<CandidateRow>& xs, const std::vector<double>& ds) {
        if (xs.size() != ds.size()) {
            throw Error(ErrorCode::DimensionMismatch, "weights", "inputs and targets differ in length");
        }
        WeightDataset out;
        out.inputs = xs;
        out.targets = ds;
        out.provenance.resize(xs.size());
        return out;
    }, py::arg("inputs"), py::arg("targets"));
    m.def("predict_scalar", &predict_scalar, py::arg("x"), py::arg("w"));
    m.def("train_weights", &train_weights, py::arg("dataset"), py::arg("config") = TrainConfig{});
    m.def("save_weights", [](const WeightVector& wv) {
        return to_text([&](std::ostream& o) { save_weights(o, wv); });
    });
    m.def("load_weights", [](const std::string& text) {
        std::istringstream in(text);
        return load_weights(in);
    });

    // pipeline + evaluation
    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("kmeans", &PipelineConfig::kmeans)
        .def_readwrite("svm", &PipelineConfig::svm)
        .def_readwrite("train", &PipelineConfig::train)
        .def_readwrite("jobs", &PipelineConfig::jobs)
        .def("set_seed", &PipelineConfig::set_seed);

    py::class_<DerivedClass>(m, "DerivedClass")
        .def_readonly("resolved", &DerivedClass::resolved)
        .def_readonly("clustering", &DerivedClass::clustering)
        .def_readonly("svm", &DerivedClass::svm)
        .def_readonly("candidates", &DerivedClass::candidates)
        .def_readonly("matrix", &DerivedClass::matrix);

    m.def("derive_class", &derive_class, py::arg("resolved"), py::arg("config") = PipelineConfig{});
    m.def("predict_class_vector",
          [](const CandidateMatrix& mat, const WeightVector& wv) { return predict_class_vector(mat, wv); });

    py::class_<ClassResult>(m, "ClassResult")
        .def_readonly("label", &ClassResult::label)
        .def_readonly("dist_mean", &ClassResult::dist_mean)
        .def_readonly("dist_median", &ClassResult::dist_median)
        .def_readonly("dist_model", &ClassResult::dist_model)
        .def_readonly("n_instances", &ClassResult::n_instances)
        .def_readonly("degenerate", &ClassResult::degenerate);

    py::class_<MeanRow>(m, "MeanRow")
        .def_readonly("dist_mean", &MeanRow::dist_mean)
        .def_readonly("dist_median", &MeanRow::dist_median)
        .def_readonly("dist_model", &MeanRow::dist_model)
        .def_readonly("n_instances", &MeanRow::n_instances);

    py::class_<EvaluationReport>(m, "EvaluationReport")
        .def_readonly("rows", &EvaluationReport::rows)
        .def_readonly("mean_row", &EvaluationReport::mean_row)
        .def("to_tsv", [](const EvaluationReport& r) {
            return to_text([&](std::ostream& o) { write_report_tsv(o, r); });
        })
        .def("to_json", [](const EvaluationReport& r) {
            return to_text([&](std::ostream& o) { write_report_json(o, r); });
        });

    m.def("evaluate",
          [](const std::vector<ResolvedClass>& classes, const PipelineConfig& cfg, const std::string& protocol) {
              py::gil_scoped_release release;
              return evaluate(classes, cfg, parse_protocol(protocol));
          },
          py::arg("classes"), py::arg("config") = PipelineConfig{}, py::arg("protocol") = "loco");
    m.def("euclidean_distance", [](const Vector& a, const Vector& b) { return euclidean_distance(a, b); });

    // synthetic
    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_classes", &SynthConfig::n_classes)
        .def_readwrite("instances_per_class", &SynthConfig::instances_per_class)
        .def_readwrite("dim", &SynthConfig::dim)
        .def_readwrite("schism", &SynthConfig::schism)
        .def_readwrite("label_noise", &SynthConfig::label_noise)
        .def_readwrite("seed", &SynthConfig::seed)
        .def_readwrite("spread", &SynthConfig::spread);

    py::class_<SyntheticData>(m, "SyntheticData")
        .def_readonly("table", &SyntheticData::table)
        .def_readonly("ontology", &SyntheticData::ontology)
        .def_readonly("ground_truth", &SyntheticData::ground_truth);

    m.def("generate_synthetic", &generate_synthetic, py::arg("config") = SynthConfig{});
}
