#include <doctest.h>

#include <random>
#include <sstream>

#include "repvec/error.hpp"
#include "repvec/evaluation.hpp"
#include "repvec/synthetic.hpp"
#include "repvec/weights.hpp"
#include "support/oracles.hpp"

using namespace repvec;

namespace {

WeightDataset random_dataset(std::mt19937_64& rng, std::size_t n, int target_column) {
    std::normal_distribution<double> normal;
    WeightDataset ds;
    for (std::size_t e = 0; e < n; ++e) {
        CandidateRow x{};
        for (auto& v : x) v = normal(rng);
        double d = 0.0;
        if (target_column >= 0) {
            d = x[static_cast<std::size_t>(target_column)];
        } else {
            for (double v : x) d += v;
            d /= 5.0;
        }
        ds.inputs.push_back(x);
        ds.targets.push_back(d);
        ds.provenance.push_back({"c", e});
    }
    return ds;
}

double variance(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

WeightDataset synthetic_dataset() {
    SynthConfig sc;
    sc.n_classes = 4;
    sc.instances_per_class = 12;
    sc.dim = 6;
    sc.seed = 3;
    const auto data = generate_synthetic(sc);
    PipelineConfig cfg;
    cfg.jobs = 1;
    const auto resolved = resolve_all(data.ontology, data.table, 1);
    const auto derived = derive_all(resolved, cfg);
    const auto samples = to_samples(derived);
    return build_weight_dataset(samples);
}

bool non_increasing(const std::vector<double>& h) {
    for (std::size_t i = 1; i < h.size(); ++i) {
        if (h[i] > h[i - 1] * (1.0 + 1e-12)) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("weights") {

TEST_CASE("dataset assembly") {
    const CandidateMatrix m({{1, 3, 5, 7, 9}, {2, 4, 6, 8, 10}});
    std::vector<ClassSample> one{{"a", m, {0.5, 0.25}}};
    const auto ds = build_weight_dataset(one);
    REQUIRE(ds.size() == 2);
    CHECK(ds.inputs[0] == CandidateRow{1, 3, 5, 7, 9});
    CHECK(ds.inputs[1] == CandidateRow{2, 4, 6, 8, 10});
    CHECK(ds.targets == std::vector<double>{0.5, 0.25});
    CHECK(ds.provenance[1].label == "a");
    CHECK(ds.provenance[1].dimension_index == 1);

    const CandidateMatrix m3({{1, 1, 1, 1, 1}, {2, 2, 2, 2, 2}, {3, 3, 3, 3, 3}});
    std::vector<ClassSample> two{{"a", m3, {1, 2, 3}}, {"b", m3, {4, 5, 6}}};
    const auto ds2 = build_weight_dataset(two);
    CHECK(ds2.size() == 6);
    CHECK(ds2.targets[3] == 4);
    CHECK(exclude_class(ds2, "a").size() == 3);
    CHECK(exclude_class(ds2, "a").targets.front() == 4);

    CHECK(build_weight_dataset(std::vector<ClassSample>{}).empty());

    std::vector<ClassSample> bad{{"a", m3, {1, 2}}};
    CHECK_THROWS_AS(build_weight_dataset(bad), Error);
    std::vector<ClassSample> mixed{{"a", m3, {1, 2, 3}}, {"b", m, {1, 2}}};
    CHECK_THROWS_AS(build_weight_dataset(mixed), Error);
}

TEST_CASE("prediction examples") {
    const CandidateRow x{1, 3, 5, 7, 9};
    CHECK(predict_scalar(x, {1, 1, 1, 1, 1}) == doctest::Approx(5.0));
    CHECK(predict_scalar(x, {2, 0, 0, 0, 0}) == 1.0);
    try {
        predict_scalar(x, {0, 0, 0, 0, 0});
        FAIL("expected ZeroWeightSum");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroWeightSum);
    }
}

TEST_CASE("property: scale invariance of the combiner") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> pos(0.01, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<CandidateRow> rows(4);
        for (auto& r : rows) for (auto& v : r) v = normal(rng);
        const CandidateMatrix m(rows);
        Weights w{};
        for (auto& v : w) v = pos(rng);
        const double c = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng));
        Weights cw = w;
        for (auto& v : cw) v *= c;
        const auto a = predict_class_vector(m, w);
        const auto b = predict_class_vector(m, cw);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    }
}

TEST_CASE("analytic gradient matches finite differences") {
    std::mt19937_64 rng(67);
    std::normal_distribution<double> normal;
    const auto ds = random_dataset(rng, 20, -1);
    // Perturb targets so the gradient is not zero.
    auto noisy = ds;
    for (auto& d : noisy.targets) d += normal(rng);
    for (int trial = 0; trial < 10; ++trial) {
        Weights theta{};
        for (auto& t : theta) t = 0.5 * normal(rng);
        const auto lg = loss_and_gradient(noisy, theta, false);
        const auto fd = oracle::fd_gradient_exp(noisy.inputs, noisy.targets, theta, 1e-5);
        CHECK(lg.loss == doctest::Approx(oracle::combiner_mse(noisy.inputs, noisy.targets,
                                                              weights_from_params(theta, false))));
        for (std::size_t k = 0; k < 5; ++k) {
            const double rel = std::abs(lg.grad[k] - fd[k]) / std::max(std::abs(fd[k]), 1e-8);
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("weight recovery with targets equal to the second candidate") {
    std::mt19937_64 rng(71);
    const auto ds = random_dataset(rng, 200, 1);
    const auto wv = train_weights(ds);
    CHECK(wv.w[1] >= 0.9);
    CHECK(wv.meta.final_loss <= 1e-6 * variance(ds.targets));
    double sum = 0.0;
    for (double v : wv.w) {
        CHECK(v > 0.0);
        sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("targets equal to the candidate mean keep uniform weights") {
    std::mt19937_64 rng(73);
    const auto ds = random_dataset(rng, 50, -1);
    const auto wv = train_weights(ds);
    CHECK(wv.meta.initial_loss < 1e-20);
    CHECK(wv.meta.final_loss < 1e-20);
    for (double v : wv.w) CHECK(v == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("training errors") {
    CHECK_THROWS_AS(train_weights(WeightDataset{}), Error);
    std::mt19937_64 rng(79);
    auto ds = random_dataset(rng, 10, 0);
    for (auto& d : ds.targets) d *= 1e6;
    TrainConfig cfg;
    cfg.learning_rate = 1e6;
    cfg.optimizer = Optimizer::GradientDescent;
    try {
        train_weights(ds, cfg);
        FAIL("expected divergence");
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::NonFiniteLoss || e.code() == ErrorCode::ZeroWeightSum));
    }
}

TEST_CASE("property: loss is non-increasing at a small learning rate") {
    const auto ds = synthetic_dataset();
    CHECK(ds.size() == 4 * 6);
    for (auto opt : {Optimizer::GradientDescent, Optimizer::Adam}) {
        double lr = 1e-3;
        bool ok = false;
        for (int attempt = 0; attempt < 4 && !ok; ++attempt, lr /= 2) {
            TrainConfig cfg;
            cfg.learning_rate = lr;
            cfg.epochs = 300;
            cfg.optimizer = opt;
            ok = non_increasing(train_weights(ds, cfg).meta.loss_history);
        }
        CHECK(ok);
    }
}

TEST_CASE("allow_negative trains raw weights") {
    std::mt19937_64 rng(83);
    const auto ds = random_dataset(rng, 100, 2);
    TrainConfig cfg;
    cfg.allow_negative = true;
    const auto wv = train_weights(ds, cfg);
    CHECK(wv.meta.allow_negative);
    CHECK(wv.meta.final_loss < wv.meta.initial_loss);
}

TEST_CASE("weights JSON round trip") {
    std::mt19937_64 rng(89);
    const auto wv = train_weights(random_dataset(rng, 30, 3));
    std::stringstream first;
    save_weights(first, wv);
    std::istringstream in(first.str());
    const auto back = load_weights(in);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(back.w[k] - wv.w[k]) <= 1e-12);
    CHECK(back.meta.epochs == wv.meta.epochs);
    std::ostringstream second;
    save_weights(second, back);
    CHECK(second.str() == first.str());

    std::istringstream flat(R"({"weights":[0.2,0.2,0.2,0.2,0.2]})");
    const auto f = load_weights(flat);
    for (double v : f.w) CHECK(v == 0.2);

    std::istringstream negative(R"({"weights":[0.5,-0.1,0.2,0.2,0.2]})");
    try {
        load_weights(negative);
        FAIL("expected InvalidWeights");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidWeights);
    }
    std::istringstream four(R"({"weights":[0.25,0.25,0.25,0.25]})");
    CHECK_THROWS_AS(load_weights(four), Error);
    std::istringstream garbage("{weights");
    try {
        load_weights(garbage);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

}
