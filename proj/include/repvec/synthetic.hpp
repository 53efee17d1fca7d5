#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "repvec/embeddings.hpp"
#include "repvec/ontology.hpp"

namespace repvec {

/// Desk-scale stand-in for a trained embedding space plus an ontology.
///
/// Each class c gets a ground-truth center g ~ N(0, I). Its instances come
/// from two isotropic Gaussian modes at g +/- (schism / 2) u for a random
/// unit direction u; each mode has covariance (spread^2 / dim) I, so
/// spread = 1 means unit total variance per mode. The modes are deliberately
/// unbalanced: the smaller one holds a fraction of the instances drawn
/// uniformly from [minor_share_lo, minor_share_hi], which biases the plain
/// instance mean away from g along u. The class label's vector is
/// g + N(0, label_noise^2 I).
struct SynthConfig {
    std::size_t n_classes = 10;
    std::size_t instances_per_class = 30;
    std::size_t dim = 20;
    double schism = 2.0;
    double label_noise = 0.1;
    std::uint64_t seed = 7;
    double spread = 1.0;
    double minor_share_lo = 0.15;
    double minor_share_hi = 0.35;
};

struct SyntheticData {
    EmbeddingTable table;
    std::vector<OntologyClass> ontology;
    std::vector<std::pair<std::string, Vector>> ground_truth;  // label -> g
};

/// Throws InvalidConfig for zero counts or out-of-range parameters.
void validate(const SynthConfig& config);

/// Fully determined by config (including seed).
SyntheticData generate_synthetic(const SynthConfig& config);

void save_ground_truth(std::ostream& out, const SyntheticData& data);

}  // namespace repvec
