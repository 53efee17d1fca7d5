#include "repvec/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "repvec/error.hpp"

namespace repvec {
namespace {

constexpr const char* kModule = "svm";
constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Solver {
public:
    Solver(std::vector<const Vector*> xs, std::vector<int> ys, const SvmConfig& cfg)
        : x_(std::move(xs)), y_(std::move(ys)), cfg_(cfg), n_(x_.size()), dim_(x_.front()->size()) {
        alpha_.assign(n_, 0.0);
        grad_.assign(n_, -1.0);
        w_.assign(dim_, 0.0);
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            diag_[i] = dot(*x_[i], *x_[i]);
        }
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::mt19937_64 rng(cfg.seed);
        std::shuffle(order_.begin(), order_.end(), rng);
    }

    void run() {
        const std::size_t passes = cfg_.max_passes == 0 ? 10 * n_ : cfg_.max_passes;
        const std::size_t max_iter = std::max<std::size_t>(passes * n_, 100);
        for (iterations_ = 0; iterations_ < max_iter; ++iterations_) {
            std::size_t i = 0;
            std::size_t j = 0;
            if (!select_pair(i, j)) {
                converged_ = true;
                return;
            }
            update_pair(i, j);
        }
        std::size_t i = 0;
        std::size_t j = 0;
        converged_ = !select_pair(i, j);
    }

    double rho() const {
        double ub = kInf;
        double lb = -kInf;
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double yg = y_[i] * grad_[i];
            if (alpha_[i] >= cfg_.C) {
                if (y_[i] == -1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (alpha_[i] <= 0.0) {
                if (y_[i] == +1) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        if (n_free > 0) {
            return sum_free / static_cast<double>(n_free);
        }
        return (ub + lb) / 2.0;
    }

    const std::vector<double>& alpha() const { return alpha_; }
    const Vector& w() const { return w_; }
    bool converged() const { return converged_; }
    std::size_t iterations() const { return iterations_; }

private:
    double kernel(std::size_t i, std::size_t j) const { return dot(*x_[i], *x_[j]); }

    bool in_up(std::size_t t) const {
        return y_[t] == +1 ? alpha_[t] < cfg_.C : alpha_[t] > 0.0;
    }
    bool in_low(std::size_t t) const {
        return y_[t] == +1 ? alpha_[t] > 0.0 : alpha_[t] < cfg_.C;
    }

    // Returns false when the maximal KKT violation is below tolerance.
    bool select_pair(std::size_t& out_i, std::size_t& out_j) const {
        double gmax = -kInf;
        std::size_t i = n_;
        for (const std::size_t t : order_) {
            if (in_up(t) && -y_[t] * grad_[t] >= gmax) {
                gmax = -y_[t] * grad_[t];
                i = t;
            }
        }
        double gmax2 = -kInf;
        double obj_min = kInf;
        std::size_t j = n_;
        for (const std::size_t t : order_) {
            if (!in_low(t)) {
                continue;
            }
            const double yg = y_[t] * grad_[t];
            gmax2 = std::max(gmax2, yg);
            if (i == n_) {
                continue;
            }
            const double grad_diff = gmax + yg;
            if (grad_diff > 0.0) {
                double quad = diag_[i] + diag_[t] - 2.0 * kernel(i, t);
                if (quad <= 0.0) {
                    quad = kTau;
                }
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj <= obj_min) {
                    obj_min = obj;
                    j = t;
                }
            }
        }
        if (i == n_ || j == n_ || gmax + gmax2 < stop_eps()) {
            return false;
        }
        out_i = i;
        out_j = j;
        return true;
    }

    double stop_eps() const { return cfg_.kkt_tol * 0.1; }

    void update_pair(std::size_t i, std::size_t j) {
        const double C = cfg_.C;
        const double old_i = alpha_[i];
        const double old_j = alpha_[j];
        double quad = diag_[i] + diag_[j] - 2.0 * kernel(i, j);
        if (quad <= 0.0) {
            quad = kTau;
        }
        double ai = old_i;
        double aj = old_j;
        if (y_[i] != y_[j]) {
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > C) {
                    ai = C;
                    aj = C - diff;
                }
            } else if (aj > C) {
                aj = C;
                ai = C + diff;
            }
        } else {
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) {
                    ai = C;
                    aj = sum - C;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > C) {
                if (aj > C) {
                    aj = C;
                    ai = sum - C;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha_[i] = ai;
        alpha_[j] = aj;

        const double di = (ai - old_i) * y_[i];
        const double dj = (aj - old_j) * y_[j];
        for (std::size_t k = 0; k < dim_; ++k) {
            w_[k] += di * (*x_[i])[k] + dj * (*x_[j])[k];
        }
        for (std::size_t t = 0; t < n_; ++t) {
            grad_[t] = y_[t] * dot(w_, *x_[t]) - 1.0;
        }
    }

    std::vector<const Vector*> x_;
    std::vector<int> y_;
    SvmConfig cfg_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    std::vector<double> diag_;
    std::vector<std::size_t> order_;
    Vector w_;
    bool converged_ = false;
    std::size_t iterations_ = 0;
};

double kkt_violation(const SvmModel& m, const std::vector<const Vector*>& xs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double margin = m.labels[i] * m.decision(*xs[i]);
        const double a = m.alphas[i];
        double v = 0.0;
        if (a <= 0.0) {
            v = std::max(0.0, 1.0 - margin);
        } else if (a >= m.C) {
            v = std::max(0.0, margin - 1.0);
        } else {
            v = std::abs(margin - 1.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

SvmModel train_linear_svm(std::span<const Vector> pos, std::span<const Vector> neg, const SvmConfig& config) {
    if (pos.empty() || neg.empty()) {
        throw Error(ErrorCode::EmptySide, kModule, "both sides need at least one training point");
    }
    if (!(config.C > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, kModule, "C must be positive");
    }
    const std::size_t dim = pos.front().size();
    std::vector<const Vector*> xs;
    std::vector<int> ys;
    for (const auto& v : pos) {
        xs.push_back(&v);
        ys.push_back(+1);
    }
    for (const auto& v : neg) {
        xs.push_back(&v);
        ys.push_back(-1);
    }
    for (const auto* v : xs) {
        if (v->size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, kModule, "training points differ in dimension");
        }
    }

    Solver solver(xs, ys, config);
    solver.run();

    SvmModel model;
    model.w = solver.w();
    model.b = -solver.rho();
    model.alphas = solver.alpha();
    model.labels = std::move(ys);
    model.C = config.C;
    model.converged = solver.converged();
    model.iterations = solver.iterations();

    const double wnorm = std::sqrt(dot(model.w, model.w));
    model.fallback_all = wnorm < 1e-12;
    model.support_mask.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        model.support_mask[i] = model.fallback_all || model.alphas[i] > config.support_eps;
    }
    model.max_kkt_violation = kkt_violation(model, xs);
    return model;
}

std::vector<int> support_membership(const SvmModel& model, std::size_t n_total) {
    if (n_total != model.support_mask.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "model was trained on " + std::to_string(model.support_mask.size()) + " points, not " +
                        std::to_string(n_total));
    }
    std::vector<int> a(n_total);
    for (std::size_t i = 0; i < n_total; ++i) {
        a[i] = model.support_mask[i] ? 1 : 0;
    }
    return a;
}

}  // namespace repvec
