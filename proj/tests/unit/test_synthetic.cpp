#include <doctest.h>

#include <cmath>
#include <sstream>

#include "repvec/embeddings.hpp"
#include "repvec/error.hpp"
#include "repvec/evaluation.hpp"
#include "repvec/synthetic.hpp"

using namespace repvec;

TEST_SUITE("synthetic") {

TEST_CASE("instance mean converges to the center without label noise") {
    // Per class E||C2 - g||^2 = spread^2 / instances, so the RMS over many
    // classes at 500 instances is about 0.045; one class alone is too noisy
    // to hold to 0.05.
    auto rms_distance = [](std::size_t instances) {
        SynthConfig sc;
        sc.n_classes = 20;
        sc.instances_per_class = instances;
        sc.dim = 10;
        sc.schism = 0.0;
        sc.label_noise = 0.0;
        sc.seed = 7;
        const auto data = generate_synthetic(sc);
        double total = 0.0;
        for (const auto& rc : resolve_all(data.ontology, data.table, 1)) {
            // With no label noise C0 is the center itself.
            Vector mean(rc.c0.size(), 0.0);
            for (const auto& x : rc.instance_vectors) for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += x[j];
            for (auto& m : mean) m /= static_cast<double>(rc.instance_vectors.size());
            const double d = euclidean_distance(mean, rc.c0);
            total += d * d;
        }
        return std::sqrt(total / 20.0);
    };
    const double small = rms_distance(20);
    const double large = rms_distance(500);
    CHECK(large < 0.05);
    CHECK(large < small);
}

TEST_CASE("single singleton class") {
    SynthConfig sc;
    sc.n_classes = 1;
    sc.instances_per_class = 1;
    sc.dim = 4;
    const auto data = generate_synthetic(sc);
    REQUIRE(data.ontology.size() == 1);
    CHECK(data.ontology[0].label == "class0");
    CHECK(data.ontology[0].instances == std::vector<std::string>{"class0_inst00"});
    const auto rc = resolve_class(data.ontology[0], data.table);
    const auto d = derive_class(rc, PipelineConfig{});
    for (std::size_t k = 0; k < kNumCandidates; ++k) CHECK(d.candidates[k] == rc.instance_vectors[0]);
}

TEST_CASE("layout of the generated data") {
    SynthConfig sc;
    sc.n_classes = 3;
    sc.instances_per_class = 4;
    sc.dim = 5;
    const auto data = generate_synthetic(sc);
    CHECK(data.table.vocab_size() == 3 * 5);
    CHECK(data.table.dimension() == 5);
    CHECK(data.ground_truth.size() == 3);
    CHECK(data.ontology[2].instances[3] == "class2_inst03");
    CHECK(data.table.contains("class1"));
}

TEST_CASE("same seed gives identical bytes") {
    SynthConfig sc;
    sc.seed = 99;
    auto dump = [&] {
        const auto data = generate_synthetic(sc);
        std::ostringstream out;
        save_embeddings(out, data.table);
        save_ontology(out, data.ontology);
        save_ground_truth(out, data);
        return out.str();
    };
    const auto a = dump();
    CHECK(a == dump());
    sc.seed = 100;
    CHECK(a != dump());
}

TEST_CASE("config validation") {
    auto expect_invalid = [](SynthConfig sc) {
        try {
            validate(sc);
            FAIL("expected InvalidConfig");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidConfig);
        }
    };
    SynthConfig sc;
    CHECK_NOTHROW(validate(sc));
    sc.n_classes = 0;
    expect_invalid(sc);
    sc = {};
    sc.instances_per_class = 0;
    expect_invalid(sc);
    sc = {};
    sc.dim = 0;
    expect_invalid(sc);
    sc = {};
    sc.label_noise = -1;
    expect_invalid(sc);
    sc = {};
    sc.minor_share_hi = 0.8;
    expect_invalid(sc);
}

}
