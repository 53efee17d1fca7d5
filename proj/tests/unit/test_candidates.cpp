#include <doctest.h>

#include <random>
#include <sstream>

#include "repvec/candidates.hpp"
#include "repvec/error.hpp"
#include "repvec/pipeline.hpp"
#include "support/oracles.hpp"

using namespace repvec;

namespace {

ResolvedClass make_class(std::vector<Vector> instances, Vector c0) {
    ResolvedClass rc;
    rc.label = "cls";
    rc.c0 = std::move(c0);
    rc.instance_vectors = std::move(instances);
    for (std::size_t i = 0; i < rc.instance_vectors.size(); ++i) {
        rc.resolved_instances.push_back("i" + std::to_string(i));
    }
    return rc;
}

void check_vec(const Vector& got, const Vector& want, double tol = 1e-12) {
    REQUIRE(got.size() == want.size());
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(std::abs(got[j] - want[j]) <= tol);
}

std::vector<Vector> random_class(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
    std::normal_distribution<double> normal;
    std::vector<Vector> xs(n, Vector(dim));
    for (std::size_t i = 0; i < n; ++i) {
        const double shift = i % 3 == 0 ? 3.0 : -1.0;
        for (auto& v : xs[i]) v = normal(rng) + shift;
    }
    return xs;
}

}  // namespace

TEST_SUITE("candidates") {

TEST_CASE("weighted_average examples") {
    const std::vector<Vector> v{{1, 1}, {5, 5}, {3, 3}};
    const std::vector<int> a{1, 0, 1};
    check_vec(weighted_average(v, a), {2, 2});

    const std::vector<Vector> single{{4, 2}};
    const std::vector<int> one{1};
    check_vec(weighted_average(single, one), {4, 2});

    const std::vector<Vector> basis{{1, 0}, {0, 1}};
    const std::vector<int> both{1, 1};
    check_vec(weighted_average(basis, both), {0.5, 0.5});

    const std::vector<int> none{0, 0};
    try {
        weighted_average(basis, none);
        FAIL("expected AllZeroMembership");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllZeroMembership);
    }
    const std::vector<int> short_mask{1};
    CHECK_THROWS_AS(weighted_average(basis, short_mask), Error);
}

TEST_CASE("median examples") {
    // Squared distances to (11/3, 0): 13.44, 7.11, 40.11.
    const std::vector<Vector> v{{0, 0}, {1, 0}, {10, 0}};
    CHECK(median_index(v) == 1);
    check_vec(median_vector(v), {1, 0});

    const std::vector<Vector> single{{7, 7}};
    check_vec(median_vector(single), {7, 7});

    const std::vector<Vector> tie{{1, 0}, {0, 1}};
    CHECK(median_index(tie) == 0);

    try {
        median_vector(std::vector<Vector>{});
        FAIL("expected EmptyInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
}

TEST_CASE("property: median matches the exhaustive scan") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 9;
        std::vector<Vector> xs(n, Vector(2));
        // Small integer grids make ties common.
        for (auto& x : xs) for (auto& v : x) v = small(rng);
        CHECK(median_index(xs) == oracle::median_argmin(xs));
    }
}

TEST_CASE("single-instance class collapses every candidate") {
    const auto rc = make_class({{2, 2}}, {0, 0});
    PipelineConfig cfg;
    const auto d = derive_class(rc, cfg);
    CHECK(d.clustering.degenerate);
    CHECK_FALSE(d.svm.has_value());
    for (std::size_t j = 0; j < kNumCandidates; ++j) check_vec(d.candidates[j], {2, 2});
}

TEST_CASE("four-point example and the mixture identity") {
    const auto rc = make_class({{0, 0}, {0.1, 0}, {10, 0}, {10.1, 0}}, {5, 0});
    PipelineConfig cfg;
    const auto d = derive_class(rc, cfg);
    check_vec(d.candidates.c4, {0.05, 0});
    check_vec(d.candidates.c5, {10.05, 0});
    check_vec(d.candidates.c2, {5.05, 0}, 1e-12);
    const double n0 = static_cast<double>(d.clustering.size_of(0));
    const double n1 = static_cast<double>(d.clustering.size_of(1));
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(std::abs(n0 * d.candidates.c4[j] + n1 * d.candidates.c5[j] - 4.0 * d.candidates.c2[j]) < 1e-10);
    }
    CHECK(n0 * d.candidates.c4[0] + n1 * d.candidates.c5[0] == doctest::Approx(20.2));
    // Support vectors of the schism are (0.1,0) and (10,0).
    check_vec(d.candidates.c1, {5.05, 0}, 1e-6);
}

TEST_CASE("build_candidates requires a model for nondegenerate clusterings") {
    const auto rc = make_class({{0, 0}, {1, 0}}, {0, 0});
    const auto cl = kmeans2(rc.instance_vectors);
    CHECK_THROWS_AS(build_candidates(rc, cl, nullptr), Error);
}

TEST_CASE("assemble_matrix layout") {
    CandidateSet cs{{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}};
    const auto m = assemble_matrix(cs, 2);
    CHECK(m.rows() == 2);
    CHECK(m.row(0) == CandidateMatrix::Row{1, 3, 5, 7, 9});
    CHECK(m.row(1) == CandidateMatrix::Row{2, 4, 6, 8, 10});

    CandidateSet same{{4, 5}, {4, 5}, {4, 5}, {4, 5}, {4, 5}};
    const auto ms = assemble_matrix(same, 2);
    CHECK(ms.row(0) == CandidateMatrix::Row{4, 4, 4, 4, 4});
    CHECK(ms.row(1) == CandidateMatrix::Row{5, 5, 5, 5, 5});

    cs.c3 = {5, 6, 7};
    try {
        assemble_matrix(cs, 2);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("candidate dump") {
    CandidateSet cs{{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10.5}};
    std::ostringstream out;
    write_candidate_dump(out, "x", cs);
    CHECK(out.str() == "x\tC1\t1\t2\nx\tC2\t3\t4\nx\tC3\t5\t6\nx\tC4\t7\t8\nx\tC5\t9\t10.5\n");
}

TEST_CASE("property: candidate invariants on random classes") {
    std::mt19937_64 rng(41);
    PipelineConfig cfg;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 12;
        const std::size_t dim = 1 + trial % 5;
        const auto xs = random_class(rng, n, dim);
        const auto d = derive_class(make_class(xs, Vector(dim, 0.0)), cfg);
        const auto& cs = d.candidates;

        // C2 is the plain mean, bit for bit.
        Vector mean(dim, 0.0);
        for (const auto& x : xs) for (std::size_t j = 0; j < dim; ++j) mean[j] += x[j];
        for (auto& m : mean) m /= static_cast<double>(n);
        check_vec(cs.c2, mean, 1e-12);

        // C3 is one of the instances.
        bool found = false;
        for (const auto& x : xs) found = found || x == cs.c3;
        CHECK(found);

        if (!d.clustering.degenerate) {
            const double n0 = static_cast<double>(d.clustering.size_of(0));
            const double n1 = static_cast<double>(d.clustering.size_of(1));
            for (std::size_t j = 0; j < dim; ++j) {
                CHECK(std::abs(n0 * cs.c4[j] + n1 * cs.c5[j] - static_cast<double>(n) * cs.c2[j]) < 1e-10);
            }
        }

        // Column extraction inverts assembly.
        const auto back = d.matrix.to_candidates();
        for (std::size_t k = 0; k < kNumCandidates; ++k) CHECK(back[k] == cs[k]);
    }
}

TEST_CASE("property: translation equivariance") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> normal;
    PipelineConfig cfg;
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 3 + trial % 10;
        const std::size_t dim = 2 + trial % 3;
        auto xs = random_class(rng, n, dim);
        Vector t(dim);
        for (auto& v : t) v = 5.0 * normal(rng);
        auto moved = xs;
        for (auto& x : moved) for (std::size_t j = 0; j < dim; ++j) x[j] += t[j];
        Vector c0(dim, 0.5);
        Vector c0t = c0;
        for (std::size_t j = 0; j < dim; ++j) c0t[j] += t[j];

        const auto a = derive_class(make_class(xs, c0), cfg);
        const auto b = derive_class(make_class(moved, c0t), cfg);
        CHECK(a.clustering.assignment == b.clustering.assignment);
        for (std::size_t k = 0; k < kNumCandidates; ++k) {
            for (std::size_t j = 0; j < dim; ++j) {
                CHECK(std::abs(b.candidates[k][j] - (a.candidates[k][j] + t[j])) < 1e-6);
            }
        }
    }
}

}
