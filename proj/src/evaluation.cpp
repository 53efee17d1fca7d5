#include "repvec/evaluation.hpp"

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "repvec/error.hpp"
#include "repvec/parallel.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "evaluation";
constexpr const char* kHeader = "class\tdist_mean\tdist_median\tdist_model\tn_instances";

using nlohmann::json;

std::string fixed(double x, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, x);
    return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) {
            break;
        }
        start = tab + 1;
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ParseError, kModule, "line " + std::to_string(line_no) + ": bad number '" + s + "'")
        .at(line_no);
}

json weights_json(const Weights& w) {
    return json(w);
}

}  // namespace

std::string to_string(Protocol p) {
    return p == Protocol::InSample ? "insample" : "loco";
}

Protocol parse_protocol(std::string_view s) {
    if (s == "insample") {
        return Protocol::InSample;
    }
    if (s == "loco") {
        return Protocol::Loco;
    }
    throw Error(ErrorCode::InvalidConfig, kModule, "unknown protocol '" + std::string(s) + "'");
}

MeanRow column_means(std::span<const ClassResult> rows) {
    MeanRow m;
    if (rows.empty()) {
        return m;
    }
    for (const auto& r : rows) {
        m.dist_mean += r.dist_mean;
        m.dist_median += r.dist_median;
        m.dist_model += r.dist_model;
        m.n_instances += static_cast<double>(r.n_instances);
    }
    const auto n = static_cast<double>(rows.size());
    m.dist_mean /= n;
    m.dist_median /= n;
    m.dist_model /= n;
    m.n_instances /= n;
    return m;
}

ClassResult score_class(const DerivedClass& d, const Weights& w) {
    const auto& c0 = d.resolved.c0;
    ClassResult r;
    r.label = d.resolved.label;
    r.dist_mean = euclidean_distance(d.candidates.c2, c0);
    r.dist_median = euclidean_distance(d.candidates.c3, c0);
    r.dist_model = euclidean_distance(predict_class_vector(d.matrix, w), c0);
    r.n_instances = d.resolved.instance_vectors.size();
    r.degenerate = d.clustering.degenerate;
    return r;
}

std::string config_hash(const PipelineConfig& c) {
    const json doc = {
        {"kmeans", {{"max_iters", c.kmeans.max_iters}, {"tol", c.kmeans.tol}, {"seed", c.kmeans.seed},
                    {"restarts", c.kmeans.restarts}}},
        {"svm", {{"C", c.svm.C}, {"kkt_tol", c.svm.kkt_tol}, {"support_eps", c.svm.support_eps},
                 {"max_passes", c.svm.max_passes}, {"seed", c.svm.seed}}},
        {"train", {{"learning_rate", c.train.learning_rate}, {"epochs", c.train.epochs}, {"seed", c.train.seed},
                   {"batch", c.train.batch}, {"allow_negative", c.train.allow_negative},
                   {"optimizer", c.train.optimizer == Optimizer::Adam ? "adam" : "gd"}}},
    };
    // FNV-1a over the canonical (key-sorted) dump.
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char ch : doc.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EvaluationReport evaluate_derived(std::span<const DerivedClass> derived, const PipelineConfig& config,
                                  Protocol protocol, const WeightVector* fixed_weights) {
    if (protocol == Protocol::Loco && derived.size() < 2) {
        throw Error(ErrorCode::InsufficientClasses, kModule, "leave-one-class-out needs at least 2 classes");
    }
    EvaluationReport report;
    report.protocol = protocol;
    report.run_meta.seed = config.train.seed;
    report.run_meta.config_hash = config_hash(config);
    for (const auto& d : derived) {
        report.run_meta.dropped_instances.emplace_back(d.label(), d.resolved.dropped_instances.size());
    }

    const auto samples = to_samples(derived);
    const WeightDataset ds = build_weight_dataset(samples);
    report.rows.resize(derived.size());

    if (protocol == Protocol::InSample) {
        const Weights w = fixed_weights ? fixed_weights->w : train_weights(ds, config.train).w;
        report.run_meta.weights.emplace_back("*", w);
        for (std::size_t c = 0; c < derived.size(); ++c) {
            report.rows[c] = score_class(derived[c], w);
        }
    } else {
        std::vector<Weights> fold_weights(derived.size());
        parallel_for(derived.size(), config.jobs, [&](std::size_t c) {
            fold_weights[c] = train_weights(exclude_class(ds, derived[c].label()), config.train).w;
            report.rows[c] = score_class(derived[c], fold_weights[c]);
        });
        for (std::size_t c = 0; c < derived.size(); ++c) {
            report.run_meta.weights.emplace_back(derived[c].label(), fold_weights[c]);
        }
    }
    report.mean_row = column_means(report.rows);
    return report;
}

EvaluationReport evaluate(std::span<const ResolvedClass> classes, const PipelineConfig& config, Protocol protocol,
                          const WeightVector* fixed_weights) {
    if (protocol == Protocol::Loco && classes.size() < 2) {
        throw Error(ErrorCode::InsufficientClasses, kModule, "leave-one-class-out needs at least 2 classes");
    }
    const auto derived = derive_all(classes, config);
    return evaluate_derived(derived, config, protocol, fixed_weights);
}

std::string format_report_row(const ClassResult& row, int precision) {
    return row.label + '\t' + fixed(row.dist_mean, precision) + '\t' + fixed(row.dist_median, precision) + '\t' +
           fixed(row.dist_model, precision) + '\t' + std::to_string(row.n_instances);
}

void write_report_tsv(std::ostream& out, const EvaluationReport& report, int precision) {
    out << kHeader << '\n';
    for (const auto& row : report.rows) {
        out << format_report_row(row, precision) << '\n';
    }
    const auto& m = report.mean_row;
    out << "MEAN\t" << fixed(m.dist_mean, precision) << '\t' << fixed(m.dist_median, precision) << '\t'
        << fixed(m.dist_model, precision) << '\t' << fixed(m.n_instances, precision) << '\n';
}

EvaluationReport read_report_tsv(std::istream& in) {
    EvaluationReport report;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != kHeader) {
        throw Error(ErrorCode::ParseError, kModule, "missing report header").at(1);
    }
    ++line_no;
    bool have_mean = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (have_mean) {
            throw Error(ErrorCode::ParseError, kModule, "rows after the MEAN row").at(line_no);
        }
        const auto f = split_tabs(line);
        if (f.size() != 5) {
            throw Error(ErrorCode::ParseError, kModule, "line " + std::to_string(line_no) + ": expected 5 columns")
                .at(line_no);
        }
        if (f[0] == "MEAN") {
            report.mean_row = {parse_double(f[1], line_no), parse_double(f[2], line_no),
                               parse_double(f[3], line_no), parse_double(f[4], line_no)};
            have_mean = true;
            continue;
        }
        ClassResult r;
        r.label = f[0];
        r.dist_mean = parse_double(f[1], line_no);
        r.dist_median = parse_double(f[2], line_no);
        r.dist_model = parse_double(f[3], line_no);
        r.n_instances = static_cast<std::size_t>(parse_double(f[4], line_no));
        report.rows.push_back(std::move(r));
    }
    if (!have_mean) {
        throw Error(ErrorCode::ParseError, kModule, "report has no MEAN row").at(line_no);
    }
    return report;
}

void write_report_json(std::ostream& out, const EvaluationReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"class", r.label},
                        {"dist_mean", r.dist_mean},
                        {"dist_median", r.dist_median},
                        {"dist_model", r.dist_model},
                        {"n_instances", r.n_instances},
                        {"degenerate", r.degenerate}});
    }
    json dropped = json::object();
    for (const auto& [label, n] : report.run_meta.dropped_instances) {
        dropped[label] = n;
    }
    json weights = json::array();
    for (const auto& [label, w] : report.run_meta.weights) {
        weights.push_back({{"scope", label}, {"weights", weights_json(w)}});
    }
    const auto& m = report.mean_row;
    const json doc = {
        {"protocol", to_string(report.protocol)},
        {"rows", std::move(rows)},
        {"mean", {{"dist_mean", m.dist_mean}, {"dist_median", m.dist_median}, {"dist_model", m.dist_model},
                  {"n_instances", m.n_instances}}},
        {"run_meta", {{"seed", report.run_meta.seed}, {"config_hash", report.run_meta.config_hash},
                      {"dropped_instances", std::move(dropped)}, {"weights", std::move(weights)}}},
    };
    out << doc.dump(2) << '\n';
}

}  // namespace repvec
