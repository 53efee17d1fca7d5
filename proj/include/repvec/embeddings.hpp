#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "repvec/vector_ops.hpp"

namespace repvec {

/// Lowercases ASCII letters; other bytes (including UTF-8 sequences) pass through.
std::string to_lower(std::string_view s);

/// Immutable token -> vector table in a single embedding space.
///
/// Tokens are stored lowercased. Iteration order (via tokens()) is the order
/// in which each token first appeared in the source, which keeps
/// serialization deterministic.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t vocab_size() const noexcept { return tokens_.size(); }

    /// Number of input lines that overwrote an earlier entry with the same token.
    std::size_t duplicate_count() const noexcept { return duplicates_; }

    /// Case-insensitive lookup. Absence is reported as an empty optional.
    std::optional<VectorView> lookup(std::string_view token) const;

    bool contains(std::string_view token) const { return lookup(token).has_value(); }

    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    class Builder;

private:
    std::size_t dimension_ = 0;
    std::size_t duplicates_ = 0;
    std::vector<std::string> tokens_;
    std::vector<Vector> vectors_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Incremental construction with the same validation rules as the loader.
class EmbeddingTable::Builder {
public:
    explicit Builder(std::size_t dimension);

    std::size_t dimension() const noexcept { return table_.dimension_; }

    /// Inserts or overwrites; throws DimensionMismatch / MalformedLine on bad input.
    Builder& add(std::string_view token, Vector vec);

    /// Throws EmptyTable when nothing was added.
    EmbeddingTable build() &&;

private:
    EmbeddingTable table_;
};

/// Parses word2vec/GloVe text: optional "vocab_size dimension" header line,
/// then "token v1 ... vN" per line.
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings_file(const std::string& path);

/// Writes the header plus one line per token, numbers in shortest
/// round-trip form.
void save_embeddings(std::ostream& out, const EmbeddingTable& table);
void save_embeddings_file(const std::string& path, const EmbeddingTable& table);

/// Mean of the vectors of every whitespace-separated token found in the
/// table. Throws NoTokenResolved when no token resolves.
Vector embed_phrase(const EmbeddingTable& table, std::string_view phrase);

/// Same as embed_phrase but reports unresolvable phrases as nullopt.
std::optional<Vector> try_embed_phrase(const EmbeddingTable& table, std::string_view phrase);

}  // namespace repvec
