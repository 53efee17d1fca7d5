#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repvec/vector_ops.hpp"

namespace repvec {

struct SvmConfig {
    double C = 1.0;
    double kkt_tol = 1e-3;
    double support_eps = 1e-8;
    std::size_t max_passes = 0;  // 0 = 10 * n; each pass allows n pair updates
    std::uint64_t seed = 0;      // permutes the scan order used to break selection ties
};

/// Soft-margin linear SVM trained on two point sets (labels +1 / -1).
/// Training points are indexed positives first, then negatives.
struct SvmModel {
    Vector w;
    double b = 0.0;
    std::vector<double> alphas;
    std::vector<int> labels;          // +1 / -1 per training point
    std::vector<bool> support_mask;   // alpha > support_eps, or fallback_all
    double C = 1.0;
    bool fallback_all = false;
    bool converged = false;
    std::size_t iterations = 0;
    double max_kkt_violation = 0.0;

    double decision(VectorView x) const { return dot(w, x) + b; }
};

/// Sequential minimal optimization on the dual with a linear kernel, using
/// maximal-gain (second order) working pair selection. When the resulting
/// normal vector is numerically zero every point is marked a support vector.
SvmModel train_linear_svm(std::span<const Vector> pos, std::span<const Vector> neg,
                          const SvmConfig& config = {});

/// a_i = 1 iff training point i is a support vector.
std::vector<int> support_membership(const SvmModel& model, std::size_t n_total);

}  // namespace repvec
