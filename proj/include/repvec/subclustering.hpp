#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repvec/vector_ops.hpp"

namespace repvec {

struct KMeansConfig {
    std::size_t max_iters = 100;
    double tol = 1e-9;  // stop once a Lloyd step improves the objective by less than this
    std::uint64_t seed = 0;
    std::size_t restarts = 16;
};

/// Two-way partition of a class's instance vectors.
///
/// Cluster ids are canonical: the first input vector always belongs to
/// cluster 0. When `degenerate` is set (one vector, or all vectors equal),
/// every assignment is 0 and both means are the overall mean.
struct SubClustering {
    std::vector<int> assignment;
    Vector mean0;
    Vector mean1;
    double objective = 0.0;  // within-cluster sum of squared distances
    std::size_t iterations = 0;
    bool degenerate = false;

    // Objective after every Lloyd iteration of the winning restart.
    std::vector<double> objective_trace;

    std::size_t size_of(int cluster) const;
};

/// Lloyd's algorithm with K = 2, finished with a Hartigan single-point-move
/// pass. Even restarts use k-means++ seeding, odd ones a uniformly random
/// pair of points; the best objective over `config.restarts` restarts wins
/// (first restart on ties).
/// Equidistant points go to cluster 0; a cluster emptied during iteration is
/// refilled with the point farthest from the surviving center.
SubClustering kmeans2(std::span<const Vector> vectors, const KMeansConfig& config = {});

/// Within-cluster SSE of an arbitrary 0/1 assignment.
double partition_objective(std::span<const Vector> vectors, std::span<const int> assignment);

}  // namespace repvec
