#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repvec/pipeline.hpp"

namespace repvec {

enum class Protocol { InSample, Loco };

std::string to_string(Protocol p);
Protocol parse_protocol(std::string_view s);

/// Distances of each representative vector to the class-name vector C0.
struct ClassResult {
    std::string label;
    double dist_mean = 0.0;    // ||C2 - C0||
    double dist_median = 0.0;  // ||C3 - C0||
    double dist_model = 0.0;   // ||Y - C0||
    std::size_t n_instances = 0;
    bool degenerate = false;
};

struct MeanRow {
    double dist_mean = 0.0;
    double dist_median = 0.0;
    double dist_model = 0.0;
    double n_instances = 0.0;
};

struct RunMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::pair<std::string, std::size_t>> dropped_instances;  // per class
    std::vector<std::pair<std::string, Weights>> weights;  // one entry (insample) or one per class (loco)
};

struct EvaluationReport {
    std::vector<ClassResult> rows;
    MeanRow mean_row;
    Protocol protocol = Protocol::InSample;
    RunMeta run_meta;
};

MeanRow column_means(std::span<const ClassResult> rows);

/// Scores every class. InSample trains one weight vector on all classes (or
/// uses `fixed_weights` when given); Loco trains class c's weights without
/// class c's examples.
EvaluationReport evaluate(std::span<const ResolvedClass> classes, const PipelineConfig& config, Protocol protocol,
                          const WeightVector* fixed_weights = nullptr);

/// Same, for classes that were already run through derive_all.
EvaluationReport evaluate_derived(std::span<const DerivedClass> derived, const PipelineConfig& config,
                                  Protocol protocol, const WeightVector* fixed_weights = nullptr);

ClassResult score_class(const DerivedClass& d, const Weights& w);

/// Stable hex digest of the pipeline configuration.
std::string config_hash(const PipelineConfig& config);

inline constexpr int kReportPrecision = 4;

std::string format_report_row(const ClassResult& row, int precision = kReportPrecision);

/// Header, one row per class, then the MEAN row.
void write_report_tsv(std::ostream& out, const EvaluationReport& report, int precision = kReportPrecision);

/// Reads a report TSV. The MEAN row is taken as written, not recomputed.
EvaluationReport read_report_tsv(std::istream& in);

/// Full-precision mirror of the TSV plus run metadata.
void write_report_json(std::ostream& out, const EvaluationReport& report);

}  // namespace repvec
