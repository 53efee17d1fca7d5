#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "repvec/candidates.hpp"

namespace repvec {

using CandidateRow = CandidateMatrix::Row;
using Weights = std::array<double, kNumCandidates>;

/// One class's contribution to the weight-learning data: its candidate
/// matrix and its class-name vector.
struct ClassSample {
    std::string label;
    CandidateMatrix matrix;
    Vector c0;
};

/// The universal (X, D) dataset: one example per (class, embedding dimension).
struct WeightDataset {
    struct Provenance {
        std::string label;
        std::size_t dimension_index = 0;
    };

    std::vector<CandidateRow> inputs;
    std::vector<double> targets;
    std::vector<Provenance> provenance;

    std::size_t size() const noexcept { return inputs.size(); }
    bool empty() const noexcept { return inputs.empty(); }
};

enum class Optimizer { Adam, GradientDescent };

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 500;
    std::uint64_t seed = 42;
    std::size_t batch = 0;  // 0 = full batch
    bool allow_negative = false;
    Optimizer optimizer = Optimizer::Adam;
};

struct TrainingMeta {
    std::size_t epochs = 0;
    double final_loss = 0.0;
    double initial_loss = 0.0;
    std::uint64_t seed = 0;
    double learning_rate = 0.0;
    std::string optimizer = "adam";
    bool allow_negative = false;
    std::size_t examples = 0;

    // Full-dataset loss before each epoch, followed by the final loss.
    // Not persisted.
    std::vector<double> loss_history;
};

struct WeightVector {
    Weights w{1.0, 1.0, 1.0, 1.0, 1.0};
    TrainingMeta meta;
};

/// Emits N examples per class, in class order then dimension order.
WeightDataset build_weight_dataset(std::span<const ClassSample> classes);

/// Copy of `ds` without the examples of class `label`.
WeightDataset exclude_class(const WeightDataset& ds, const std::string& label);

/// sum(w_j x_j) / sum(w_j); throws ZeroWeightSum when sum(w) == 0.
double predict_scalar(const CandidateRow& x, const Weights& w);
Vector predict_class_vector(const CandidateMatrix& m, const Weights& w);
inline Vector predict_class_vector(const CandidateMatrix& m, const WeightVector& wv) {
    return predict_class_vector(m, wv.w);
}

double mse_loss(const WeightDataset& ds, const Weights& w);

struct LossGradient {
    double loss = 0.0;
    Weights grad{};
};

/// Loss and its gradient with respect to the raw parameters. With
/// `allow_negative` false the weights are exp(theta); otherwise theta are the
/// weights themselves.
LossGradient loss_and_gradient(const WeightDataset& ds, const Weights& theta, bool allow_negative);

/// Maps raw parameters to (unnormalized) weights.
Weights weights_from_params(const Weights& theta, bool allow_negative);

/// Minimizes mean squared error of predict_scalar against the targets,
/// starting from equal weights. Returns weights normalized to sum 1.
WeightVector train_weights(const WeightDataset& ds, const TrainConfig& config = {});

void save_weights(std::ostream& out, const WeightVector& wv);
void save_weights_file(const std::string& path, const WeightVector& wv);
WeightVector load_weights(std::istream& in);
WeightVector load_weights_file(const std::string& path);

}  // namespace repvec
