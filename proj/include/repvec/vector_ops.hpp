#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace repvec {

using Vector = std::vector<double>;
using VectorView = std::span<const double>;

double dot(VectorView a, VectorView b);
double squared_distance(VectorView a, VectorView b);

/// Euclidean distance; throws DimensionMismatch on unequal lengths.
double euclidean_distance(VectorView a, VectorView b);

/// Arithmetic mean of a nonempty list of equal-length vectors.
Vector mean_of(std::span<const Vector> vectors);

// Formats a double as the shortest decimal string that parses back to the
// same value.
std::string format_shortest(double value);

}  // namespace repvec
