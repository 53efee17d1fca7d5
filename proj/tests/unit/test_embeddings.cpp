#include <doctest.h>

#include <random>
#include <sstream>

#include "repvec/embeddings.hpp"
#include "repvec/error.hpp"

using namespace repvec;

namespace {

EmbeddingTable parse(const std::string& text) {
    std::istringstream in(text);
    return load_embeddings(in);
}

ErrorCode code_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("header line sets dimension and vocabulary") {
    const auto t = parse("2 3\napple 1.0 0.0 0.0\ncourt 0.0 1.0 0.0");
    CHECK(t.vocab_size() == 2);
    CHECK(t.dimension() == 3);
    CHECK(t.contains("apple"));
    CHECK(t.contains("court"));
}

TEST_CASE("dimension is inferred when the header is absent") {
    const auto t = parse("apple 1.0 0.0\ncourt 0.0 1.0");
    CHECK(t.dimension() == 2);
    CHECK(t.vocab_size() == 2);
}

TEST_CASE("arity mismatch reports the physical line") {
    try {
        parse("apple 1.0 0.0\ncourt 0.0");
        FAIL("expected MalformedLine");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedLine);
        CHECK(e.position() == 2);
    }
}

TEST_CASE("bad numbers, empty input and zero dimension") {
    CHECK(code_of("apple 1.0 x\n") == ErrorCode::MalformedLine);
    CHECK(code_of("apple 1.0 nan\n") == ErrorCode::MalformedLine);
    CHECK(code_of("") == ErrorCode::EmptyTable);
    CHECK(code_of("3 2\n") == ErrorCode::EmptyTable);
    CHECK(code_of("1 0\napple\n") == ErrorCode::DimensionZero);
    CHECK(code_of("apple\n") == ErrorCode::DimensionZero);
    CHECK(code_of("2 3\napple 1 2\n") == ErrorCode::MalformedLine);
}

TEST_CASE("tokens are lowercased and later duplicates win") {
    const auto t = parse("Apple 1 0\nAPPLE 2 0\n");
    CHECK(t.vocab_size() == 1);
    CHECK(t.duplicate_count() == 1);
    CHECK((*t.lookup("apple"))[0] == 2.0);
}

TEST_CASE("lookup is case-insensitive and reports absence") {
    const auto t = parse("2 3\napple 1.0 0.0 0.0\ncourt 0.0 1.0 0.0");
    const auto a = t.lookup("Apple");
    REQUIRE(a.has_value());
    CHECK(std::vector<double>(a->begin(), a->end()) == std::vector<double>{1.0, 0.0, 0.0});
    CHECK_FALSE(t.lookup("zebra").has_value());
    const auto c = t.lookup("court");
    REQUIRE(c.has_value());
    CHECK(std::vector<double>(c->begin(), c->end()) == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("embed_phrase averages resolved tokens and skips unknown ones") {
    const auto t = parse("supreme 1 0\ncourt 0 1\n");
    CHECK(embed_phrase(t, "supreme court") == Vector{0.5, 0.5});
    CHECK(embed_phrase(t, "court") == Vector{0.0, 1.0});
    CHECK(embed_phrase(t, "  Supreme   qqq ") == Vector{1.0, 0.0});
    try {
        embed_phrase(t, "qqq zzz");
        FAIL("expected NoTokenResolved");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoTokenResolved);
    }
    CHECK_FALSE(try_embed_phrase(t, "qqq").has_value());
}

TEST_CASE("property: single token phrase equals lookup, lookup ignores case") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    EmbeddingTable::Builder b(4);
    for (int i = 0; i < 50; ++i) {
        b.add("tok" + std::to_string(i), {normal(rng), normal(rng), normal(rng), normal(rng)});
    }
    const auto t = std::move(b).build();
    for (const auto& tok : t.tokens()) {
        const auto v = *t.lookup(tok);
        CHECK(embed_phrase(t, tok) == Vector(v.begin(), v.end()));
        std::string upper = tok;
        for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        CHECK(t.lookup(upper)->data() == v.data());
    }
}

TEST_CASE("property: save then load reproduces every component exactly") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 10.0);
    EmbeddingTable::Builder b(7);
    for (int i = 0; i < 40; ++i) {
        Vector v(7);
        for (auto& x : v) x = normal(rng);
        b.add("w" + std::to_string(i), v);
    }
    const auto t = std::move(b).build();
    std::ostringstream first;
    save_embeddings(first, t);
    const auto back = parse(first.str());
    REQUIRE(back.vocab_size() == t.vocab_size());
    for (const auto& tok : t.tokens()) {
        const auto a = *t.lookup(tok);
        const auto c = *back.lookup(tok);
        CHECK(std::equal(a.begin(), a.end(), c.begin(), c.end()));
    }
    std::ostringstream second;
    save_embeddings(second, back);
    CHECK(first.str() == second.str());
}

}
