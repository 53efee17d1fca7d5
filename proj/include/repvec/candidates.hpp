#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repvec/ontology.hpp"
#include "repvec/subclustering.hpp"
#include "repvec/svm.hpp"
#include "repvec/vector_ops.hpp"

namespace repvec {

inline constexpr std::size_t kNumCandidates = 5;

/// C1..C5 for one class.
struct CandidateSet {
    Vector c1;  // average support vector
    Vector c2;  // average instance vector
    Vector c3;  // instance nearest the class mean
    Vector c4;  // sub-cluster 0 mean
    Vector c5;  // sub-cluster 1 mean

    const Vector& operator[](std::size_t j) const;
};

/// N x 5 matrix; row i is (C1[i], C2[i], C3[i], C4[i], C5[i]).
class CandidateMatrix {
public:
    using Row = std::array<double, kNumCandidates>;

    CandidateMatrix() = default;
    explicit CandidateMatrix(std::vector<Row> rows) : rows_(std::move(rows)) {}

    std::size_t rows() const noexcept { return rows_.size(); }
    static constexpr std::size_t cols() noexcept { return kNumCandidates; }

    const Row& row(std::size_t i) const { return rows_.at(i); }
    double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }

    Vector column(std::size_t j) const;
    CandidateSet to_candidates() const;

private:
    std::vector<Row> rows_;
};

/// sum(a_i * v_i) / sum(a_i); throws AllZeroMembership when no a_i is set.
Vector weighted_average(std::span<const Vector> vectors, std::span<const int> membership);

/// Index of the vector with the smallest squared distance to the mean;
/// lowest index wins ties.
std::size_t median_index(std::span<const Vector> vectors);
Vector median_vector(std::span<const Vector> vectors);

/// `model` may be empty only when the clustering is degenerate.
CandidateSet build_candidates(const ResolvedClass& resolved, const SubClustering& clustering,
                              const SvmModel* model);

CandidateMatrix assemble_matrix(const CandidateSet& cs, std::size_t dimension);

/// Rows of "class\tC<k>\tv1\t...\tvN", one per candidate.
void write_candidate_dump(std::ostream& out, const std::string& label, const CandidateSet& cs);

}  // namespace repvec
