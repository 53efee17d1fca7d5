#include "repvec/pipeline.hpp"

#include "repvec/error.hpp"
#include "repvec/parallel.hpp"

namespace repvec {

DerivedClass derive_class(ResolvedClass resolved, const PipelineConfig& config) {
    DerivedClass out;
    try {
        const auto& xs = resolved.instance_vectors;
        out.clustering = kmeans2(xs, config.kmeans);
        if (!out.clustering.degenerate) {
            std::vector<Vector> pos;
            std::vector<Vector> neg;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                (out.clustering.assignment[i] == 0 ? pos : neg).push_back(xs[i]);
            }
            out.svm = train_linear_svm(pos, neg, config.svm);
        }
        out.candidates = build_candidates(resolved, out.clustering, out.svm ? &*out.svm : nullptr);
        out.matrix = assemble_matrix(out.candidates, resolved.c0.size());
    } catch (Error& e) {
        if (e.class_label().empty()) {
            e.with_class(resolved.label);
        }
        throw;
    }
    out.resolved = std::move(resolved);
    return out;
}

std::vector<ResolvedClass> resolve_all(std::span<const OntologyClass> classes, const EmbeddingTable& table,
                                       std::size_t jobs) {
    std::vector<ResolvedClass> out(classes.size());
    parallel_for(classes.size(), jobs, [&](std::size_t i) { out[i] = resolve_class(classes[i], table); });
    return out;
}

std::vector<DerivedClass> derive_all(std::span<const ResolvedClass> classes, const PipelineConfig& config) {
    std::vector<DerivedClass> out(classes.size());
    parallel_for(classes.size(), config.jobs,
                 [&](std::size_t i) { out[i] = derive_class(classes[i], config); });
    return out;
}

std::vector<ClassSample> to_samples(std::span<const DerivedClass> derived) {
    std::vector<ClassSample> out;
    out.reserve(derived.size());
    for (const auto& d : derived) {
        out.push_back({d.resolved.label, d.matrix, d.resolved.c0});
    }
    return out;
}

}  // namespace repvec
