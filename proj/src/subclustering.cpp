#include "repvec/subclustering.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "subclustering";

struct Run {
    std::vector<int> assignment;
    Vector means[2];
    double objective = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::vector<double> trace;
};

void compute_means(std::span<const Vector> xs, const std::vector<int>& assignment, Vector (&means)[2]) {
    const std::size_t dim = xs.front().size();
    std::size_t counts[2] = {0, 0};
    means[0].assign(dim, 0.0);
    means[1].assign(dim, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto& m = means[assignment[i]];
        for (std::size_t j = 0; j < dim; ++j) {
            m[j] += xs[i][j];
        }
        ++counts[assignment[i]];
    }
    for (int k = 0; k < 2; ++k) {
        for (auto& x : means[k]) {
            x /= static_cast<double>(counts[k]);
        }
    }
}

double objective_of(std::span<const Vector> xs, const std::vector<int>& assignment, const Vector (&means)[2]) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        total += squared_distance(xs[i], means[assignment[i]]);
    }
    return total;
}

// Assigns every point to its nearest center (ties -> 0), then repairs an
// empty cluster by moving the point farthest from the other center into it.
void assign(std::span<const Vector> xs, const Vector (&centers)[2], std::vector<int>& assignment) {
    std::size_t counts[2] = {0, 0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d0 = squared_distance(xs[i], centers[0]);
        const double d1 = squared_distance(xs[i], centers[1]);
        assignment[i] = d1 < d0 ? 1 : 0;
        ++counts[assignment[i]];
    }
    for (int empty = 0; empty < 2; ++empty) {
        if (counts[empty] != 0) {
            continue;
        }
        const int other = 1 - empty;
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = squared_distance(xs[i], centers[other]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        assignment[far] = empty;
    }
}

// Single-point moves that strictly lower the objective. Moving x from a
// (size n_a) to b (size n_b) changes it by
//   n_b/(n_b+1) |x-m_b|^2 - n_a/(n_a-1) |x-m_a|^2.
// Every fixed point of this pass is also a Lloyd fixed point, but not the
// other way round. Returns whether anything moved.
bool hartigan(std::span<const Vector> xs, std::vector<int>& assignment, Vector (&means)[2]) {
    std::size_t counts[2] = {0, 0};
    for (int a : assignment) {
        ++counts[a];
    }
    bool any = false;
    for (std::size_t sweep = 0; sweep < 100; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const int a = assignment[i];
            const int b = 1 - a;
            if (counts[a] < 2) {
                continue;
            }
            const double na = static_cast<double>(counts[a]);
            const double nb = static_cast<double>(counts[b]);
            const double gain = na / (na - 1.0) * squared_distance(xs[i], means[a]);
            const double cost = nb / (nb + 1.0) * squared_distance(xs[i], means[b]);
            if (cost >= gain * (1.0 - 1e-12)) {
                continue;
            }
            for (std::size_t j = 0; j < xs[i].size(); ++j) {
                means[a][j] = (means[a][j] * na - xs[i][j]) / (na - 1.0);
                means[b][j] = (means[b][j] * nb + xs[i][j]) / (nb + 1.0);
            }
            --counts[a];
            ++counts[b];
            assignment[i] = b;
            moved = true;
            any = true;
        }
        if (!moved) {
            break;
        }
    }
    if (any) {
        compute_means(xs, assignment, means);
    }
    return any;
}

Run lloyd(std::span<const Vector> xs, Vector c0, Vector c1, const KMeansConfig& config) {
    Run run;
    run.assignment.assign(xs.size(), 0);
    Vector centers[2] = {std::move(c0), std::move(c1)};

    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < std::max<std::size_t>(config.max_iters, 1); ++it) {
        const auto before = run.assignment;
        assign(xs, centers, run.assignment);
        compute_means(xs, run.assignment, run.means);
        const double obj = objective_of(xs, run.assignment, run.means);
        run.trace.push_back(obj);
        run.objective = obj;
        run.iterations = it + 1;
        centers[0] = run.means[0];
        centers[1] = run.means[1];
        if ((it > 0 && before == run.assignment) || previous - obj < config.tol) {
            break;
        }
        previous = obj;
    }
    if (hartigan(xs, run.assignment, run.means)) {
        run.objective = objective_of(xs, run.assignment, run.means);
        run.trace.push_back(run.objective);
    }
    return run;
}

// k-means++ seeding for K = 2, or a uniformly random distinct pair.
std::pair<Vector, Vector> seed_centers(std::span<const Vector> xs, bool plusplus, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
    const std::size_t first = pick(rng);
    if (!plusplus) {
        std::uniform_int_distribution<std::size_t> other(0, xs.size() - 2);
        std::size_t second = other(rng);
        if (second >= first) ++second;
        return {xs[first], xs[second]};
    }
    std::vector<double> weights(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        weights[i] = squared_distance(xs[i], xs[first]);
    }
    std::discrete_distribution<std::size_t> pick_far(weights.begin(), weights.end());
    const std::size_t second = pick_far(rng);
    return {xs[first], xs[second]};
}

}  // namespace

std::size_t SubClustering::size_of(int cluster) const {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), cluster));
}

double partition_objective(std::span<const Vector> vectors, std::span<const int> assignment) {
    std::vector<int> a(assignment.begin(), assignment.end());
    Vector means[2];
    compute_means(vectors, a, means);
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        total += squared_distance(vectors[i], means[a[i]]);
    }
    return total;
}

SubClustering kmeans2(std::span<const Vector> vectors, const KMeansConfig& config) {
    if (vectors.empty()) {
        throw Error(ErrorCode::EmptyInput, kModule, "k-means needs at least one vector");
    }
    const std::size_t dim = vectors.front().size();
    for (const auto& v : vectors) {
        if (v.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, kModule, "input vectors differ in dimension");
        }
    }

    SubClustering out;
    const bool all_equal = std::all_of(vectors.begin(), vectors.end(),
                                       [&](const Vector& v) { return v == vectors.front(); });
    if (vectors.size() == 1 || all_equal) {
        out.degenerate = true;
        out.assignment.assign(vectors.size(), 0);
        out.mean0 = mean_of(vectors);
        out.mean1 = out.mean0;
        out.objective = 0.0;
        for (const auto& v : vectors) {
            out.objective += squared_distance(v, out.mean0);
        }
        out.objective_trace = {out.objective};
        return out;
    }

    std::mt19937_64 rng(config.seed);
    Run best;
    for (std::size_t r = 0; r < std::max<std::size_t>(config.restarts, 1); ++r) {
        auto [c0, c1] = seed_centers(vectors, r % 2 == 0, rng);
        Run run = lloyd(vectors, std::move(c0), std::move(c1), config);
        if (run.objective < best.objective) {
            best = std::move(run);
        }
    }

    if (best.assignment.front() != 0) {
        for (auto& a : best.assignment) {
            a = 1 - a;
        }
        std::swap(best.means[0], best.means[1]);
    }
    out.assignment = std::move(best.assignment);
    out.mean0 = std::move(best.means[0]);
    out.mean1 = std::move(best.means[1]);
    out.objective = best.objective;
    out.iterations = best.iterations;
    out.objective_trace = std::move(best.trace);
    return out;
}

}  // namespace repvec
