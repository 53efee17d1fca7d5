#include "repvec/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "embeddings";

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

std::optional<double> parse_real(std::string_view s) {
    // from_chars rejects a leading '+', which some exporters emit.
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::size_t> parse_count(std::string_view s) {
    std::size_t value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return value;
}

Error malformed(std::size_t line_no, const std::string& why) {
    Error e(ErrorCode::MalformedLine, kModule, "line " + std::to_string(line_no) + ": " + why);
    e.at(line_no);
    return e;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

std::optional<VectorView> EmbeddingTable::lookup(std::string_view token) const {
    const auto it = index_.find(to_lower(token));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return VectorView(vectors_[it->second]);
}

EmbeddingTable::Builder::Builder(std::size_t dimension) {
    if (dimension == 0) {
        throw Error(ErrorCode::DimensionZero, kModule, "embedding dimension must be positive");
    }
    table_.dimension_ = dimension;
}

EmbeddingTable::Builder& EmbeddingTable::Builder::add(std::string_view token, Vector vec) {
    if (token.empty()) {
        throw Error(ErrorCode::MalformedLine, kModule, "empty token");
    }
    if (vec.size() != table_.dimension_) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "token '" + std::string(token) + "' has " + std::to_string(vec.size()) +
                        " components, expected " + std::to_string(table_.dimension_));
    }
    for (double x : vec) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::MalformedLine, kModule,
                        "non-finite component for token '" + std::string(token) + "'");
        }
    }
    auto key = to_lower(token);
    if (const auto it = table_.index_.find(key); it != table_.index_.end()) {
        table_.vectors_[it->second] = std::move(vec);
        ++table_.duplicates_;
        return *this;
    }
    table_.index_.emplace(key, table_.tokens_.size());
    table_.tokens_.push_back(std::move(key));
    table_.vectors_.push_back(std::move(vec));
    return *this;
}

EmbeddingTable EmbeddingTable::Builder::build() && {
    if (table_.tokens_.empty()) {
        throw Error(ErrorCode::EmptyTable, kModule, "no embedding entries");
    }
    return std::move(table_);
}

EmbeddingTable load_embeddings(std::istream& in) {
    std::optional<EmbeddingTable::Builder> builder;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty()) {
            continue;
        }
        if (first_content_line) {
            first_content_line = false;
            if (fields.size() == 2) {
                const auto vocab = parse_count(fields[0]);
                const auto dim = parse_count(fields[1]);
                if (vocab && dim) {
                    builder.emplace(*dim);  // throws DimensionZero
                    continue;
                }
            }
            if (fields.size() == 1) {
                throw Error(ErrorCode::DimensionZero, kModule,
                            "line " + std::to_string(line_no) + " has a token but no components");
            }
            builder.emplace(fields.size() - 1);
        }

        const std::size_t dim = fields.size() - 1;
        Vector vec;
        vec.reserve(dim);
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const auto v = parse_real(fields[k]);
            if (!v) {
                throw malformed(line_no, "cannot parse '" + std::string(fields[k]) + "' as a finite real");
            }
            vec.push_back(*v);
        }
        try {
            builder->add(fields[0], std::move(vec));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::DimensionMismatch) {
                throw malformed(line_no, "expected " + std::to_string(builder->dimension()) +
                                             " components, found " + std::to_string(dim));
            }
            throw;
        }
    }
    if (!builder) {
        throw Error(ErrorCode::EmptyTable, kModule, "no embedding entries");
    }
    return std::move(*builder).build();
}

EmbeddingTable load_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, kModule, "cannot open '" + path + "'");
    }
    return load_embeddings(in);
}

void save_embeddings(std::ostream& out, const EmbeddingTable& table) {
    out << table.vocab_size() << ' ' << table.dimension() << '\n';
    for (const auto& token : table.tokens()) {
        out << token;
        const auto vec = table.lookup(token);
        for (double x : *vec) {
            out << ' ' << format_shortest(x);
        }
        out << '\n';
    }
}

void save_embeddings_file(const std::string& path, const EmbeddingTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, kModule, "cannot write '" + path + "'");
    }
    save_embeddings(out, table);
}

std::optional<Vector> try_embed_phrase(const EmbeddingTable& table, std::string_view phrase) {
    const auto tokens = split_ws(phrase);
    if (tokens.empty()) {
        throw Error(ErrorCode::NoTokenResolved, kModule, "empty phrase");
    }
    Vector acc(table.dimension(), 0.0);
    std::size_t found = 0;
    for (const auto tok : tokens) {
        const auto v = table.lookup(tok);
        if (!v) {
            continue;
        }
        for (std::size_t j = 0; j < acc.size(); ++j) {
            acc[j] += (*v)[j];
        }
        ++found;
    }
    if (found == 0) {
        return std::nullopt;
    }
    if (found > 1) {
        for (auto& x : acc) {
            x /= static_cast<double>(found);
        }
    }
    return acc;
}

Vector embed_phrase(const EmbeddingTable& table, std::string_view phrase) {
    auto v = try_embed_phrase(table, phrase);
    if (!v) {
        throw Error(ErrorCode::NoTokenResolved, kModule,
                    "no token of '" + std::string(phrase) + "' is in the vocabulary");
    }
    return std::move(*v);
}

}  // namespace repvec
