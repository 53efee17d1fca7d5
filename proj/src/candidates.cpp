#include "repvec/candidates.hpp"

#include <ostream>

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "candidates";

}  // namespace

const Vector& CandidateSet::operator[](std::size_t j) const {
    switch (j) {
        case 0: return c1;
        case 1: return c2;
        case 2: return c3;
        case 3: return c4;
        case 4: return c5;
        default: throw std::out_of_range("candidate index out of range");
    }
}

Vector CandidateMatrix::column(std::size_t j) const {
    Vector out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        out[i] = rows_[i].at(j);
    }
    return out;
}

CandidateSet CandidateMatrix::to_candidates() const {
    return {column(0), column(1), column(2), column(3), column(4)};
}

Vector weighted_average(std::span<const Vector> vectors, std::span<const int> membership) {
    if (vectors.size() != membership.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "membership length differs from vector count");
    }
    std::size_t count = 0;
    Vector acc;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (membership[i] == 0) {
            continue;
        }
        if (acc.empty()) {
            acc.assign(vectors[i].size(), 0.0);
        } else if (vectors[i].size() != acc.size()) {
            throw Error(ErrorCode::DimensionMismatch, kModule, "vectors differ in dimension");
        }
        for (std::size_t j = 0; j < acc.size(); ++j) {
            acc[j] += vectors[i][j];
        }
        ++count;
    }
    if (count == 0) {
        throw Error(ErrorCode::AllZeroMembership, kModule, "membership selects no vector");
    }
    for (auto& x : acc) {
        x /= static_cast<double>(count);
    }
    return acc;
}

std::size_t median_index(std::span<const Vector> vectors) {
    if (vectors.empty()) {
        throw Error(ErrorCode::EmptyInput, kModule, "median of zero vectors");
    }
    const std::vector<int> all(vectors.size(), 1);
    const Vector avg = weighted_average(vectors, all);
    std::size_t best = 0;
    double best_d = squared_distance(vectors[0], avg);
    for (std::size_t i = 1; i < vectors.size(); ++i) {
        const double d = squared_distance(vectors[i], avg);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Vector median_vector(std::span<const Vector> vectors) {
    return vectors[median_index(vectors)];
}

CandidateSet build_candidates(const ResolvedClass& resolved, const SubClustering& clustering,
                              const SvmModel* model) {
    const auto& xs = resolved.instance_vectors;
    if (clustering.assignment.size() != xs.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule, "clustering does not match the instance list")
            .with_class(resolved.label);
    }
    CandidateSet cs;
    cs.c2 = weighted_average(xs, std::vector<int>(xs.size(), 1));
    cs.c3 = median_vector(xs);
    if (clustering.degenerate) {
        cs.c1 = cs.c2;
        cs.c4 = cs.c2;
        cs.c5 = cs.c2;
        return cs;
    }
    if (model == nullptr) {
        throw Error(ErrorCode::InvalidConfig, kModule, "nondegenerate class needs an SVM model")
            .with_class(resolved.label);
    }

    // The SVM saw cluster 0 as positives then cluster 1 as negatives; map
    // its membership back to instance order.
    std::vector<std::size_t> order;
    for (int k = 0; k < 2; ++k) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (clustering.assignment[i] == k) {
                order.push_back(i);
            }
        }
    }
    const auto svm_membership = support_membership(*model, xs.size());
    std::vector<int> membership(xs.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        membership[order[k]] = svm_membership[k];
    }
    cs.c1 = weighted_average(xs, membership);

    std::vector<int> in0(xs.size());
    std::vector<int> in1(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        in0[i] = clustering.assignment[i] == 0 ? 1 : 0;
        in1[i] = 1 - in0[i];
    }
    cs.c4 = weighted_average(xs, in0);
    cs.c5 = weighted_average(xs, in1);
    return cs;
}

CandidateMatrix assemble_matrix(const CandidateSet& cs, std::size_t dimension) {
    for (std::size_t j = 0; j < kNumCandidates; ++j) {
        if (cs[j].size() != dimension) {
            throw Error(ErrorCode::DimensionMismatch, kModule,
                        "candidate C" + std::to_string(j + 1) + " has " + std::to_string(cs[j].size()) +
                            " components, expected " + std::to_string(dimension));
        }
    }
    std::vector<CandidateMatrix::Row> rows(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
        for (std::size_t j = 0; j < kNumCandidates; ++j) {
            rows[i][j] = cs[j][i];
        }
    }
    return CandidateMatrix(std::move(rows));
}

void write_candidate_dump(std::ostream& out, const std::string& label, const CandidateSet& cs) {
    for (std::size_t j = 0; j < kNumCandidates; ++j) {
        out << label << "\tC" << (j + 1);
        for (double x : cs[j]) {
            out << '\t' << format_shortest(x);
        }
        out << '\n';
    }
}

}  // namespace repvec
