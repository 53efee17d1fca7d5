#include "repvec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "json.hpp"

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "synthetic";

std::string instance_token(std::size_t cls, std::size_t inst, std::size_t n_instances) {
    std::string num = std::to_string(inst);
    const std::size_t width = std::max<std::size_t>(2, std::to_string(n_instances - 1).size());
    if (num.size() < width) {
        num.insert(0, width - num.size(), '0');
    }
    return "class" + std::to_string(cls) + "_inst" + num;
}

}  // namespace

void validate(const SynthConfig& c) {
    auto bad = [](const std::string& why) { return Error(ErrorCode::InvalidConfig, kModule, why); };
    if (c.n_classes == 0) throw bad("n_classes must be at least 1");
    if (c.instances_per_class == 0) throw bad("instances_per_class must be at least 1");
    if (c.dim == 0) throw bad("dim must be at least 1");
    if (!(c.schism >= 0.0) || !std::isfinite(c.schism)) throw bad("schism must be a nonnegative real");
    if (!(c.label_noise >= 0.0) || !std::isfinite(c.label_noise)) throw bad("label_noise must be nonnegative");
    if (!(c.spread >= 0.0) || !std::isfinite(c.spread)) throw bad("spread must be nonnegative");
    if (!(c.minor_share_lo >= 0.0 && c.minor_share_lo <= c.minor_share_hi && c.minor_share_hi <= 0.5)) {
        throw bad("minor share range must satisfy 0 <= lo <= hi <= 0.5");
    }
}

SyntheticData generate_synthetic(const SynthConfig& config) {
    validate(config);
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> share(config.minor_share_lo, config.minor_share_hi);
    std::bernoulli_distribution coin(0.5);

    const std::size_t dim = config.dim;
    const std::size_t n = config.instances_per_class;
    const double mode_sd = config.spread / std::sqrt(static_cast<double>(dim));

    EmbeddingTable::Builder builder(dim);
    SyntheticData data;

    for (std::size_t c = 0; c < config.n_classes; ++c) {
        Vector g(dim);
        for (auto& x : g) {
            x = normal(rng);
        }
        Vector u(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& x : u) {
                x = normal(rng);
                norm += x * x;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& x : u) {
            x /= norm;
        }

        const double minor_share = share(rng);
        const int minor_side = coin(rng) ? 1 : -1;
        std::size_t n_minor = static_cast<std::size_t>(std::lround(minor_share * static_cast<double>(n)));
        if (n >= 2) {
            n_minor = std::clamp<std::size_t>(n_minor, 1, n - 1);
        } else {
            n_minor = coin(rng) ? 1 : 0;
        }
        std::vector<int> side(n, -minor_side);
        std::fill_n(side.begin(), n_minor, minor_side);
        std::shuffle(side.begin(), side.end(), rng);

        const std::string label = "class" + std::to_string(c);
        Vector label_vec(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            label_vec[j] = g[j] + config.label_noise * normal(rng);
        }
        builder.add(label, std::move(label_vec));

        OntologyClass cls;
        cls.label = label;
        for (std::size_t i = 0; i < n; ++i) {
            Vector v(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                v[j] = g[j] + side[i] * (config.schism / 2.0) * u[j] + mode_sd * normal(rng);
            }
            auto token = instance_token(c, i, n);
            builder.add(token, std::move(v));
            cls.instances.push_back(std::move(token));
        }
        data.ontology.push_back(std::move(cls));
        data.ground_truth.emplace_back(label, std::move(g));
    }
    data.table = std::move(builder).build();
    return data;
}

void save_ground_truth(std::ostream& out, const SyntheticData& data) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [label, g] : data.ground_truth) {
        arr.push_back({{"label", label}, {"center", g}});
    }
    nlohmann::json doc;
    doc["classes"] = std::move(arr);
    out << doc.dump(2) << '\n';
}

}  // namespace repvec
