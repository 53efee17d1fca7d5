#pragma once

#include <optional>
#include <span>
#include <vector>

#include "repvec/candidates.hpp"
#include "repvec/embeddings.hpp"
#include "repvec/ontology.hpp"
#include "repvec/subclustering.hpp"
#include "repvec/svm.hpp"
#include "repvec/weights.hpp"

namespace repvec {

struct PipelineConfig {
    KMeansConfig kmeans;
    SvmConfig svm;
    TrainConfig train;
    std::size_t jobs = 0;  // 0 = hardware concurrency

    /// Points every stochastic stage at the same seed.
    void set_seed(std::uint64_t seed) {
        kmeans.seed = seed;
        svm.seed = seed;
        train.seed = seed;
    }
};

/// Everything computed for one class on the way to its candidate matrix.
struct DerivedClass {
    ResolvedClass resolved;
    SubClustering clustering;
    std::optional<SvmModel> svm;  // absent for degenerate clusterings
    CandidateSet candidates;
    CandidateMatrix matrix;

    const std::string& label() const { return resolved.label; }
};

/// Sub-clusters, trains the schism SVM, and builds C1..C5 for one class.
DerivedClass derive_class(ResolvedClass resolved, const PipelineConfig& config);

std::vector<ResolvedClass> resolve_all(std::span<const OntologyClass> classes, const EmbeddingTable& table,
                                       std::size_t jobs = 0);

/// Per-class derivation fanned out over config.jobs workers; output order
/// matches input order.
std::vector<DerivedClass> derive_all(std::span<const ResolvedClass> classes, const PipelineConfig& config);

std::vector<ClassSample> to_samples(std::span<const DerivedClass> derived);

}  // namespace repvec
