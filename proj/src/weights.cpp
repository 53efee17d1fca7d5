#include "repvec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "weights";
constexpr double kMinAbsWeightSum = 1e-6;

using nlohmann::json;

double weight_sum(const Weights& w) {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

Weights normalized(const Weights& w) {
    const double s = weight_sum(w);
    Weights out{};
    for (std::size_t j = 0; j < w.size(); ++j) {
        out[j] = w[j] / s;
    }
    return out;
}

// Loss and gradient over the examples listed in `idx`.
LossGradient loss_and_gradient_subset(const WeightDataset& ds, const Weights& theta, bool allow_negative,
                                      std::span<const std::size_t> idx) {
    const Weights w = weights_from_params(theta, allow_negative);
    const double s = weight_sum(w);
    if (allow_negative && std::abs(s) < kMinAbsWeightSum) {
        throw Error(ErrorCode::ZeroWeightSum, kModule, "weight sum collapsed towards zero during training");
    }
    LossGradient out;
    Weights dw{};
    for (const std::size_t e : idx) {
        const auto& x = ds.inputs[e];
        double yhat = 0.0;
        for (std::size_t k = 0; k < kNumCandidates; ++k) {
            yhat += w[k] * x[k];
        }
        yhat /= s;
        const double r = yhat - ds.targets[e];
        out.loss += r * r;
        // d yhat / d w_k = (x_k - yhat) / sum(w)
        for (std::size_t k = 0; k < kNumCandidates; ++k) {
            dw[k] += 2.0 * r * (x[k] - yhat) / s;
        }
    }
    const double n = static_cast<double>(idx.size());
    out.loss /= n;
    for (std::size_t k = 0; k < kNumCandidates; ++k) {
        dw[k] /= n;
        out.grad[k] = allow_negative ? dw[k] : dw[k] * w[k];  // chain rule through exp
    }
    return out;
}

std::string optimizer_name(Optimizer o) {
    return o == Optimizer::Adam ? "adam" : "gd";
}

}  // namespace

WeightDataset build_weight_dataset(std::span<const ClassSample> classes) {
    WeightDataset ds;
    if (classes.empty()) {
        return ds;
    }
    const std::size_t n = classes.front().matrix.rows();
    for (const auto& cls : classes) {
        if (cls.matrix.rows() != n || cls.c0.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, kModule,
                        "class '" + cls.label + "' does not match embedding dimension " + std::to_string(n))
                .with_class(cls.label);
        }
        for (std::size_t i = 0; i < n; ++i) {
            ds.inputs.push_back(cls.matrix.row(i));
            ds.targets.push_back(cls.c0[i]);
            ds.provenance.push_back({cls.label, i});
        }
    }
    return ds;
}

WeightDataset exclude_class(const WeightDataset& ds, const std::string& label) {
    WeightDataset out;
    for (std::size_t e = 0; e < ds.size(); ++e) {
        if (ds.provenance[e].label == label) {
            continue;
        }
        out.inputs.push_back(ds.inputs[e]);
        out.targets.push_back(ds.targets[e]);
        out.provenance.push_back(ds.provenance[e]);
    }
    return out;
}

double predict_scalar(const CandidateRow& x, const Weights& w) {
    const double s = weight_sum(w);
    if (s == 0.0 || !std::isfinite(s)) {
        throw Error(ErrorCode::ZeroWeightSum, kModule, "weights sum to zero");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < kNumCandidates; ++j) {
        acc += w[j] * x[j];
    }
    return acc / s;
}

Vector predict_class_vector(const CandidateMatrix& m, const Weights& w) {
    Vector y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        y[i] = predict_scalar(m.row(i), w);
    }
    return y;
}

double mse_loss(const WeightDataset& ds, const Weights& w) {
    if (ds.empty()) {
        throw Error(ErrorCode::EmptyDataset, kModule, "loss of an empty dataset");
    }
    double total = 0.0;
    for (std::size_t e = 0; e < ds.size(); ++e) {
        const double r = predict_scalar(ds.inputs[e], w) - ds.targets[e];
        total += r * r;
    }
    return total / static_cast<double>(ds.size());
}

Weights weights_from_params(const Weights& theta, bool allow_negative) {
    if (allow_negative) {
        return theta;
    }
    Weights w{};
    for (std::size_t k = 0; k < kNumCandidates; ++k) {
        w[k] = std::exp(theta[k]);
    }
    return w;
}

LossGradient loss_and_gradient(const WeightDataset& ds, const Weights& theta, bool allow_negative) {
    if (ds.empty()) {
        throw Error(ErrorCode::EmptyDataset, kModule, "gradient of an empty dataset");
    }
    std::vector<std::size_t> all(ds.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return loss_and_gradient_subset(ds, theta, allow_negative, all);
}

WeightVector train_weights(const WeightDataset& ds, const TrainConfig& config) {
    if (ds.empty()) {
        throw Error(ErrorCode::EmptyDataset, kModule, "cannot train weights on an empty dataset");
    }
    if (!(config.learning_rate > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, kModule, "learning rate must be positive");
    }
    const bool neg = config.allow_negative;
    // exp(0) = 1 and the identity parameterization both start at equal weights.
    Weights theta{};
    theta.fill(neg ? 1.0 : 0.0);

    Weights m{};
    Weights v{};
    constexpr double kBeta1 = 0.9;
    // Short second-moment memory: under w = exp(theta) the gradients of the
    // losing candidates shrink with their weights, and a long memory of the
    // early, larger gradients would stall their descent.
    constexpr double kBeta2 = 0.9;
    constexpr double kEps = 1e-8;
    std::size_t step = 0;

    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = (config.batch == 0 || config.batch >= ds.size()) ? ds.size() : config.batch;
    std::mt19937_64 rng(config.seed);

    WeightVector out;
    auto& meta = out.meta;
    meta.loss_history.reserve(config.epochs + 1);

    auto check_finite = [&](double loss) {
        if (!std::isfinite(loss)) {
            throw Error(ErrorCode::NonFiniteLoss, kModule, "training loss diverged; lower the learning rate");
        }
    };

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (batch < ds.size()) {
            std::shuffle(order.begin(), order.end(), rng);
        }
        for (std::size_t start = 0; start < ds.size(); start += batch) {
            const std::size_t len = std::min(batch, ds.size() - start);
            const auto lg = loss_and_gradient_subset(ds, theta, neg, std::span(order).subspan(start, len));
            if (batch == ds.size()) {
                check_finite(lg.loss);
                meta.loss_history.push_back(lg.loss);
            }
            ++step;
            for (std::size_t k = 0; k < kNumCandidates; ++k) {
                const double g = lg.grad[k];
                if (config.optimizer == Optimizer::Adam) {
                    m[k] = kBeta1 * m[k] + (1.0 - kBeta1) * g;
                    v[k] = kBeta2 * v[k] + (1.0 - kBeta2) * g * g;
                    const double mhat = m[k] / (1.0 - std::pow(kBeta1, static_cast<double>(step)));
                    const double vhat = v[k] / (1.0 - std::pow(kBeta2, static_cast<double>(step)));
                    theta[k] -= config.learning_rate * mhat / (std::sqrt(vhat) + kEps);
                } else {
                    theta[k] -= config.learning_rate * g;
                }
            }
        }
        if (batch < ds.size()) {
            const double loss = loss_and_gradient(ds, theta, neg).loss;
            check_finite(loss);
            meta.loss_history.push_back(loss);
        }
    }
    if (batch < ds.size()) {
        // History holds post-epoch losses; prepend the starting loss.
        Weights start{};
        start.fill(neg ? 1.0 : 0.0);
        meta.loss_history.insert(meta.loss_history.begin(), loss_and_gradient(ds, start, neg).loss);
    } else {
        const double final_loss = loss_and_gradient(ds, theta, neg).loss;
        check_finite(final_loss);
        meta.loss_history.push_back(final_loss);
    }

    const Weights w = weights_from_params(theta, neg);
    if (std::abs(weight_sum(w)) < kMinAbsWeightSum) {
        throw Error(ErrorCode::ZeroWeightSum, kModule, "learned weights sum to zero");
    }
    out.w = normalized(w);
    meta.epochs = config.epochs;
    meta.initial_loss = meta.loss_history.front();
    meta.final_loss = meta.loss_history.back();
    meta.seed = config.seed;
    meta.learning_rate = config.learning_rate;
    meta.optimizer = optimizer_name(config.optimizer);
    meta.allow_negative = neg;
    meta.examples = ds.size();
    return out;
}

void save_weights(std::ostream& out, const WeightVector& wv) {
    json doc;
    doc["weights"] = wv.w;
    doc["meta"] = {
        {"epochs", wv.meta.epochs},
        {"final_loss", wv.meta.final_loss},
        {"initial_loss", wv.meta.initial_loss},
        {"seed", wv.meta.seed},
        {"learning_rate", wv.meta.learning_rate},
        {"optimizer", wv.meta.optimizer},
        {"allow_negative", wv.meta.allow_negative},
        {"examples", wv.meta.examples},
    };
    out << doc.dump(2) << '\n';
}

void save_weights_file(const std::string& path, const WeightVector& wv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, kModule, "cannot write '" + path + "'");
    }
    save_weights(out, wv);
}

WeightVector load_weights(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, kModule, e.what()).at(e.byte);
    }
    if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
        throw Error(ErrorCode::ParseError, kModule, "expected an object with a \"weights\" array");
    }
    const auto& arr = doc["weights"];
    if (arr.size() != kNumCandidates) {
        throw Error(ErrorCode::InvalidWeights, kModule,
                    "expected " + std::to_string(kNumCandidates) + " weights, found " + std::to_string(arr.size()));
    }
    WeightVector wv;
    if (const auto it = doc.find("meta"); it != doc.end() && it->is_object()) {
        const auto& m = *it;
        wv.meta.epochs = m.value("epochs", std::size_t{0});
        wv.meta.final_loss = m.value("final_loss", 0.0);
        wv.meta.initial_loss = m.value("initial_loss", 0.0);
        wv.meta.seed = m.value("seed", std::uint64_t{0});
        wv.meta.learning_rate = m.value("learning_rate", 0.0);
        wv.meta.optimizer = m.value("optimizer", std::string("adam"));
        wv.meta.allow_negative = m.value("allow_negative", false);
        wv.meta.examples = m.value("examples", std::size_t{0});
    }
    for (std::size_t j = 0; j < kNumCandidates; ++j) {
        if (!arr[j].is_number()) {
            throw Error(ErrorCode::InvalidWeights, kModule, "weight " + std::to_string(j + 1) + " is not a number");
        }
        const double x = arr[j].get<double>();
        if (!std::isfinite(x) || (!wv.meta.allow_negative && x <= 0.0)) {
            throw Error(ErrorCode::InvalidWeights, kModule,
                        "weight " + std::to_string(j + 1) + " must be positive and finite");
        }
        wv.w[j] = x;
    }
    const double s = weight_sum(wv.w);
    if (std::abs(s) < kMinAbsWeightSum) {
        throw Error(ErrorCode::InvalidWeights, kModule, "weights sum to zero");
    }
    if (std::abs(s - 1.0) > 1e-9) {
        wv.w = normalized(wv.w);
    }
    return wv;
}

WeightVector load_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, kModule, "cannot open '" + path + "'");
    }
    return load_weights(in);
}

}  // namespace repvec
