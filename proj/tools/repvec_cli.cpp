// repvec: derive representative vectors for ontology classes from instance
// word embeddings.
//
//   repvec synth    --out-dir DIR [--classes N --instances N --dim N ...]
//   repvec train    --embeddings E --ontology O --out W.json
//   repvec derive   --embeddings E --ontology O --weights W.json --out Y.tsv
//   repvec evaluate --embeddings E --ontology O [--protocol loco|insample]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "repvec/repvec.hpp"

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string embeddings_path;
    std::string ontology_path;
    std::string weights_path;
    std::string output_path = "-";
    std::string candidates_path;
    std::string json_path;
    std::uint64_t seed = 42;
    double svm_c = 1.0;
    std::size_t kmeans_restarts = 16;
    std::size_t kmeans_max_iters = 100;
    double kmeans_tol = 1e-9;
    double learning_rate = 0.05;
    std::size_t epochs = 500;
    bool allow_negative = false;
    std::string protocol = "loco";
    std::size_t jobs = 0;
    std::string log_level;
};

repvec::PipelineConfig pipeline_config(const RunConfig& rc) {
    repvec::PipelineConfig pc;
    pc.set_seed(rc.seed);
    pc.svm.C = rc.svm_c;
    pc.kmeans.restarts = rc.kmeans_restarts;
    pc.kmeans.max_iters = rc.kmeans_max_iters;
    pc.kmeans.tol = rc.kmeans_tol;
    pc.train.learning_rate = rc.learning_rate;
    pc.train.epochs = rc.epochs;
    pc.train.allow_negative = rc.allow_negative;
    pc.jobs = rc.jobs;
    return pc;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw repvec::Error(repvec::ErrorCode::Io, "cli", "cannot write '" + path + "'");
    }
    return out;
}

// Writes via `fn` to `path`, or to stdout for "-".
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    auto out = open_out(path);
    fn(out);
}

std::vector<repvec::DerivedClass> load_and_derive(const RunConfig& rc, const repvec::PipelineConfig& pc) {
    const auto table = repvec::load_embeddings_file(rc.embeddings_path);
    spdlog::debug("embeddings: {} tokens, dimension {}", table.vocab_size(), table.dimension());
    if (table.duplicate_count() > 0) {
        spdlog::warn("embeddings: {} duplicate tokens overwritten", table.duplicate_count());
    }
    const auto ontology = repvec::load_ontology_file(rc.ontology_path);
    const auto resolved = repvec::resolve_all(ontology, table, pc.jobs);
    for (const auto& r : resolved) {
        if (!r.dropped_instances.empty()) {
            spdlog::warn("ontology: class '{}': dropped {} unresolvable instance(s)", r.label,
                         r.dropped_instances.size());
        }
    }
    return repvec::derive_all(resolved, pc);
}

int cmd_train(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto derived = load_and_derive(rc, pc);
    const auto samples = repvec::to_samples(derived);
    const auto ds = repvec::build_weight_dataset(samples);
    spdlog::info("examples: {}", ds.size());
    const auto wv = repvec::train_weights(ds, pc.train);
    spdlog::info("final loss: {}", wv.meta.final_loss);
    repvec::save_weights_file(rc.output_path, wv);
    return 0;
}

int cmd_derive(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto wv = repvec::load_weights_file(rc.weights_path);
    const auto derived = load_and_derive(rc, pc);
    emit(rc.output_path, [&](std::ostream& out) {
        for (const auto& d : derived) {
            out << d.label();
            for (double x : repvec::predict_class_vector(d.matrix, wv)) {
                out << '\t' << repvec::format_shortest(x);
            }
            out << '\n';
        }
    });
    if (!rc.candidates_path.empty()) {
        auto out = open_out(rc.candidates_path);
        for (const auto& d : derived) {
            repvec::write_candidate_dump(out, d.label(), d.candidates);
        }
    }
    return 0;
}

int cmd_evaluate(const RunConfig& rc) {
    const auto pc = pipeline_config(rc);
    const auto protocol = repvec::parse_protocol(rc.protocol);
    std::optional<repvec::WeightVector> fixed;
    if (!rc.weights_path.empty()) {
        if (protocol != repvec::Protocol::InSample) {
            throw repvec::Error(repvec::ErrorCode::InvalidConfig, "cli",
                                "--weights can only be scored with --protocol insample");
        }
        fixed = repvec::load_weights_file(rc.weights_path);
    }
    const auto derived = load_and_derive(rc, pc);
    const auto report = repvec::evaluate_derived(derived, pc, protocol, fixed ? &*fixed : nullptr);
    emit(rc.output_path, [&](std::ostream& out) { repvec::write_report_tsv(out, report); });
    if (!rc.json_path.empty()) {
        auto out = open_out(rc.json_path);
        repvec::write_report_json(out, report);
    }
    spdlog::info("mean distances: mean {:.4f}, median {:.4f}, model {:.4f}", report.mean_row.dist_mean,
                 report.mean_row.dist_median, report.mean_row.dist_model);
    return 0;
}

int cmd_synth(const repvec::SynthConfig& sc, const std::string& out_dir) {
    const auto data = repvec::generate_synthetic(sc);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    repvec::save_embeddings_file((dir / "embeddings.txt").string(), data.table);
    repvec::save_ontology_file((dir / "ontology.json").string(), data.ontology);
    auto truth = open_out((dir / "truth.json").string());
    repvec::save_ground_truth(truth, data);
    spdlog::info("wrote {} classes x {} instances (dim {}) to {}", sc.n_classes, sc.instances_per_class, sc.dim,
                 out_dir);
    return 0;
}

void configure_logging(const std::string& flag) {
    auto logger = spdlog::stderr_color_mt("repvec");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    std::string level = flag;
    if (level.empty()) {
        if (const char* env = std::getenv("REPVEC_LOG")) {
            level = env;
        }
    }
    spdlog::set_level(level.empty() ? spdlog::level::info : spdlog::level::from_str(level));
}

void add_pipeline_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--embeddings", rc.embeddings_path, "word2vec text embeddings")->required();
    sub->add_option("--ontology", rc.ontology_path, "ontology JSON")->required();
    sub->add_option("--seed", rc.seed, "seed for every stochastic stage")->capture_default_str();
    sub->add_option("--svm-c", rc.svm_c, "soft-margin box constraint")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--kmeans-restarts", rc.kmeans_restarts)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--kmeans-max-iters", rc.kmeans_max_iters)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--kmeans-tol", rc.kmeans_tol)->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--jobs", rc.jobs, "worker threads (0 = all processors)")->capture_default_str();
}

void add_train_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--lr", rc.learning_rate, "learning rate")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--epochs", rc.epochs)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_flag("--allow-negative", rc.allow_negative, "train unconstrained (possibly negative) weights");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representative vectors for ontology classes from instance word embeddings"};
    app.require_subcommand(1);
    RunConfig rc;
    app.add_option("--log-level", rc.log_level, "trace|debug|info|warn|error|off (env: REPVEC_LOG)");

    auto* train = app.add_subcommand("train", "learn candidate weights from an ontology");
    add_pipeline_options(train, rc);
    add_train_options(train, rc);
    train->add_option("--out", rc.output_path, "weights JSON to write")->required();

    auto* derive = app.add_subcommand("derive", "emit each class's representative vector");
    add_pipeline_options(derive, rc);
    derive->add_option("--weights", rc.weights_path, "weights JSON from `train`")->required();
    derive->add_option("--out", rc.output_path, "output TSV ('-' for stdout)")->capture_default_str();
    derive->add_option("--candidates", rc.candidates_path, "optional TSV dump of C1..C5");

    auto* evaluate = app.add_subcommand("evaluate", "score mean, median, and model vectors against C0");
    add_pipeline_options(evaluate, rc);
    add_train_options(evaluate, rc);
    evaluate->add_option("--protocol", rc.protocol)
        ->check(CLI::IsMember({"insample", "loco"}))
        ->capture_default_str();
    evaluate->add_option("--weights", rc.weights_path, "score fixed weights instead of training (insample)");
    evaluate->add_option("--out", rc.output_path, "report TSV ('-' for stdout)")->capture_default_str();
    evaluate->add_option("--json", rc.json_path, "full-precision JSON sidecar");

    repvec::SynthConfig sc;
    std::string out_dir;
    auto* synth = app.add_subcommand("synth", "write a synthetic embedding table and ontology");
    synth->add_option("--classes", sc.n_classes)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--instances", sc.instances_per_class)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--dim", sc.dim)->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--schism", sc.schism, "distance between the two instance modes")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--label-noise", sc.label_noise, "std. dev. of label-vector noise per component")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--spread", sc.spread, "total std. dev. of each instance mode")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--seed", sc.seed)->capture_default_str();
    synth->add_option("--out-dir", out_dir, "directory for embeddings.txt, ontology.json, truth.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_code = app.exit(e);
        return rc_code == 0 ? 0 : 2;
    }

    try {
        configure_logging(rc.log_level);
    } catch (const std::exception& e) {
        std::cerr << "invalid log level: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*train) return cmd_train(rc);
        if (*derive) return cmd_derive(rc);
        if (*evaluate) return cmd_evaluate(rc);
        if (*synth) {
            try {
                repvec::validate(sc);
            } catch (const repvec::Error& e) {
                spdlog::error("{}", e.what());
                return 2;
            }
            return cmd_synth(sc, out_dir);
        }
    } catch (const repvec::Error& e) {
        if (e.class_label().empty()) {
            spdlog::error("{}: {}", e.module(), e.what());
        } else {
            spdlog::error("{}: class '{}': {}", e.module(), e.class_label(), e.what());
        }
        return 1;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 2;
}
