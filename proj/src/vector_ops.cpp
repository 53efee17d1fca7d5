#include "repvec/vector_ops.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "repvec/error.hpp"

namespace repvec {

double dot(VectorView a, VectorView b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double squared_distance(VectorView a, VectorView b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double euclidean_distance(VectorView a, VectorView b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "evaluation",
                    "cannot compare vectors of length " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()));
    }
    return std::sqrt(squared_distance(a, b));
}

Vector mean_of(std::span<const Vector> vectors) {
    if (vectors.empty()) {
        throw Error(ErrorCode::EmptyInput, "vector_ops", "mean of zero vectors");
    }
    Vector out(vectors.front().size(), 0.0);
    for (const auto& v : vectors) {
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] += v[j];
        }
    }
    const auto n = static_cast<double>(vectors.size());
    for (auto& x : out) {
        x /= n;
    }
    return out;
}

std::string format_shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace repvec
