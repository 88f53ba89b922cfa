#include "polarity/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <numeric>
#include <unordered_map>

#include "polarity/error.hpp"
#include "polarity/random.hpp"

namespace polarity {

namespace {

constexpr double kTau = 1e-12;

// Rows of Q_ij = y_i y_j <x_i, x_j>, computed on demand and kept under a byte budget (LRU).
class QMatrix {
public:
    QMatrix(std::span<const SparseVector* const> xs, std::span<const double> y, std::size_t dim,
            std::size_t cache_bytes)
        : xs_(xs), y_(y), scratch_(dim, 0.0) {
        const auto row_bytes = std::max<std::size_t>(1, xs.size() * sizeof(double));
        capacity_ = std::max<std::size_t>(2, cache_bytes / row_bytes);
        diag_.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) diag_[i] = xs[i]->squared_norm();
    }

    double diag(std::size_t i) const { return diag_[i]; }

    const std::vector<double>& row(std::size_t i) {
        if (auto it = index_.find(i); it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
        if (lru_.size() >= capacity_) {
            index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        lru_.emplace_front(i, compute(i));
        index_[i] = lru_.begin();
        return lru_.front().second;
    }

private:
    std::vector<double> compute(std::size_t i) {
        for (const auto& [id, v] : xs_[i]->entries) scratch_[id] = v;
        std::vector<double> out(xs_.size());
        for (std::size_t j = 0; j < xs_.size(); ++j) {
            double dot = 0;
            for (const auto& [id, v] : xs_[j]->entries) dot += v * scratch_[id];
            out[j] = y_[i] * y_[j] * dot;
        }
        for (const auto& [id, v] : xs_[i]->entries) scratch_[id] = 0;
        return out;
    }

    std::span<const SparseVector* const> xs_;
    std::span<const double> y_;
    std::vector<double> scratch_;
    std::vector<double> diag_;
    std::size_t capacity_ = 2;
    std::list<std::pair<std::size_t, std::vector<double>>> lru_;
    std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

}  // namespace

double default_C(std::span<const SparseVector> vectors) {
    if (vectors.empty()) throw DataError("default C needs a non-empty training set");
    double total = 0;
    for (const auto& v : vectors) total += v.squared_norm();
    if (total <= 0) throw DataError("default C is undefined: every training vector is zero");
    return static_cast<double>(vectors.size()) / total;
}

double LinearSvmModel::decision(const SparseVector& v) const {
    double s = bias;
    for (const auto& [id, value] : v.entries)
        if (id < weights.size()) s += value * weights[id];
    return s;
}

Prediction predict_svm(const LinearSvmModel& model, const SparseVector& v) {
    const double s = model.decision(v);
    return Prediction{s >= 0 ? Label::Positive : Label::Negative, s};
}

std::vector<double> training_margins(const LinearSvmModel& model, std::span<const SparseVector> vectors) {
    std::vector<double> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) out.push_back(sign(v.label.value_or(Label::Positive)) * model.decision(v));
    return out;
}

LinearSvmModel train_svm(std::span<const SparseVector> vectors, std::size_t dim, const SvmOptions& opts) {
    const std::size_t n = vectors.size();
    std::size_t npos = 0;
    for (const auto& v : vectors) {
        if (!v.label) throw DataError("SVM training vector without a label");
        if (*v.label == Label::Positive) ++npos;
        for (const auto& [id, value] : v.entries)
            if (id >= dim) throw DataError("feature id " + std::to_string(id) + " outside the vocabulary");
    }
    if (npos == 0 || npos == n) throw DataError("SVM training set has a single class");
    if (opts.tol <= 0) throw ConfigError("SVM tolerance must be positive");
    if (opts.max_epochs == 0) throw ConfigError("SVM max epochs must be positive");

    const double C = opts.C ? *opts.C : default_C(vectors);
    if (!(C > 0) || !std::isfinite(C)) throw ConfigError("SVM C must be positive and finite");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (opts.shuffle_seed) seeded_shuffle(order, *opts.shuffle_seed);
    std::vector<const SparseVector*> xs(n);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = &vectors[order[k]];
        y[k] = sign(*xs[k]->label);
    }

    QMatrix Q(xs, y, dim, opts.cache_mb << 20);
    std::vector<double> alpha(n, 0.0), G(n, -1.0);
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0; };
    auto objective = [&] {
        double f = 0;
        for (std::size_t t = 0; t < n; ++t) f += alpha[t] * (G[t] - 1.0);
        return 0.5 * f;
    };

    SvmTrainingMeta meta;
    const std::size_t max_iter = opts.max_epochs * n;
    double eps = opts.tol;
    double violation = 0;
    double rho = 0;

    auto compute_rho = [&] {
        double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum = 0;
        std::size_t free = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const double yG = y[t] * G[t];
            if (upper(t)) {
                if (y[t] < 0) ub = std::min(ub, yG); else lb = std::max(lb, yG);
            } else if (lower(t)) {
                if (y[t] > 0) ub = std::min(ub, yG); else lb = std::max(lb, yG);
            } else {
                ++free;
                sum += yG;
            }
        }
        return free > 0 ? sum / static_cast<double>(free) : (ub + lb) / 2;
    };

    while (true) {
        // Select i by maximal violation, then j by second-order gain.
        double Gmax = -std::numeric_limits<double>::infinity();
        double Gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (!upper(t) && -G[t] >= Gmax) { Gmax = -G[t]; i = static_cast<std::ptrdiff_t>(t); }
            } else {
                if (!lower(t) && G[t] >= Gmax) { Gmax = G[t]; i = static_cast<std::ptrdiff_t>(t); }
            }
        }
        const std::vector<double>* Qi = i >= 0 ? &Q.row(static_cast<std::size_t>(i)) : nullptr;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; Qi && t < n; ++t) {
            const auto si = static_cast<std::size_t>(i);
            if (y[t] > 0) {
                if (lower(t)) continue;
                const double diff = Gmax + G[t];
                Gmax2 = std::max(Gmax2, G[t]);
                if (diff > 0) {
                    double quad = Q.diag(si) + Q.diag(t) - 2.0 * y[si] * (*Qi)[t];
                    if (quad <= 0) quad = kTau;
                    const double gain = -(diff * diff) / quad;
                    if (gain <= best) { best = gain; j = static_cast<std::ptrdiff_t>(t); }
                }
            } else {
                if (upper(t)) continue;
                const double diff = Gmax - G[t];
                Gmax2 = std::max(Gmax2, -G[t]);
                if (diff > 0) {
                    double quad = Q.diag(si) + Q.diag(t) + 2.0 * y[si] * (*Qi)[t];
                    if (quad <= 0) quad = kTau;
                    const double gain = -(diff * diff) / quad;
                    if (gain <= best) { best = gain; j = static_cast<std::ptrdiff_t>(t); }
                }
            }
        }
        violation = (i < 0) ? 0.0 : Gmax + Gmax2;

        if (i < 0 || j < 0 || violation < eps) {
            // Converged at this working tolerance; confirm the duality gap before stopping.
            rho = compute_rho();
            const double b = -rho;
            double w2 = 0, hinge = 0;
            for (std::size_t t = 0; t < n; ++t) {
                w2 += alpha[t] * (G[t] + 1.0);
                hinge += std::max(0.0, 1.0 - (G[t] + 1.0 + y[t] * b));
            }
            const double primal = 0.5 * w2 + C * hinge;
            const double gap = primal + objective();
            if (gap <= opts.tol * (1.0 + std::abs(primal)) || eps < 1e-12 || i < 0 || j < 0) break;
            eps *= 0.1;
            continue;
        }
        if (meta.iterations >= max_iter) {
            meta.converged = false;
            rho = compute_rho();
            break;
        }

        const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
        const auto& Qj = Q.row(sj);
        const auto& QiRow = Q.row(si);  // may have been evicted and recomputed
        const double old_ai = alpha[si], old_aj = alpha[sj];
        if (y[si] != y[sj]) {
            double quad = Q.diag(si) + Q.diag(sj) + 2.0 * QiRow[sj];
            if (quad <= 0) quad = kTau;
            const double delta = (-G[si] - G[sj]) / quad;
            const double diff = alpha[si] - alpha[sj];
            alpha[si] += delta;
            alpha[sj] += delta;
            if (diff > 0) {
                if (alpha[sj] < 0) { alpha[sj] = 0; alpha[si] = diff; }
            } else {
                if (alpha[si] < 0) { alpha[si] = 0; alpha[sj] = -diff; }
            }
            if (diff > 0) {
                if (alpha[si] > C) { alpha[si] = C; alpha[sj] = C - diff; }
            } else {
                if (alpha[sj] > C) { alpha[sj] = C; alpha[si] = C + diff; }
            }
        } else {
            double quad = Q.diag(si) + Q.diag(sj) - 2.0 * QiRow[sj];
            if (quad <= 0) quad = kTau;
            const double delta = (G[si] - G[sj]) / quad;
            const double sum = alpha[si] + alpha[sj];
            alpha[si] -= delta;
            alpha[sj] += delta;
            if (sum > C) {
                if (alpha[si] > C) { alpha[si] = C; alpha[sj] = sum - C; }
            } else {
                if (alpha[sj] < 0) { alpha[sj] = 0; alpha[si] = sum; }
            }
            if (sum > C) {
                if (alpha[sj] > C) { alpha[sj] = C; alpha[si] = sum - C; }
            } else {
                if (alpha[si] < 0) { alpha[si] = 0; alpha[sj] = sum; }
            }
        }
        const double dai = alpha[si] - old_ai, daj = alpha[sj] - old_aj;
        for (std::size_t t = 0; t < n; ++t) G[t] += QiRow[t] * dai + Qj[t] * daj;

        ++meta.iterations;
        if (meta.iterations % n == 0) meta.objective_trace.push_back(objective());
    }

    LinearSvmModel model;
    model.C = C;
    model.tol = opts.tol;
    model.bias = -rho;
    model.weights.assign(dim, 0.0);
    double w2 = 0, hinge = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0) {
            ++meta.support_vectors;
            for (const auto& [id, v] : xs[t]->entries) model.weights[id] += alpha[t] * y[t] * v;
        }
        w2 += alpha[t] * (G[t] + 1.0);
        hinge += std::max(0.0, 1.0 - (G[t] + 1.0 + y[t] * model.bias));
    }
    meta.objective = objective();
    meta.objective_trace.push_back(meta.objective);
    meta.primal = 0.5 * w2 + C * hinge;
    meta.duality_gap = meta.primal + meta.objective;
    meta.hinge_loss = hinge;
    meta.max_violation = violation;
    meta.epochs = static_cast<double>(meta.iterations) / static_cast<double>(n);
    meta.alpha.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) meta.alpha[order[k]] = alpha[k];
    model.meta = std::move(meta);
    return model;
}

nlohmann::json LinearSvmModel::to_json() const {
    return nlohmann::json{{"type", "linear_svm"},
                          {"version", kFormatVersion},
                          {"C", C},
                          {"tol", tol},
                          {"bias", bias},
                          {"weights", weights},
                          {"meta",
                           {{"iterations", meta.iterations},
                            {"epochs", meta.epochs},
                            {"objective", meta.objective},
                            {"primal", meta.primal},
                            {"duality_gap", meta.duality_gap},
                            {"hinge_loss", meta.hinge_loss},
                            {"max_violation", meta.max_violation},
                            {"support_vectors", meta.support_vectors},
                            {"converged", meta.converged}}}};
}

LinearSvmModel LinearSvmModel::from_json(const nlohmann::json& j) {
    try {
        if (j.at("type") != "linear_svm") throw DataError("model is not a linear SVM model");
        if (j.at("version").get<int>() != kFormatVersion) throw DataError("unsupported SVM model version");
        LinearSvmModel m;
        m.C = j.at("C").get<double>();
        m.tol = j.at("tol").get<double>();
        m.bias = j.at("bias").get<double>();
        m.weights = j.at("weights").get<std::vector<double>>();
        const auto& meta = j.at("meta");
        m.meta.iterations = meta.at("iterations").get<std::size_t>();
        m.meta.epochs = meta.at("epochs").get<double>();
        m.meta.objective = meta.at("objective").get<double>();
        m.meta.primal = meta.at("primal").get<double>();
        m.meta.duality_gap = meta.at("duality_gap").get<double>();
        m.meta.hinge_loss = meta.at("hinge_loss").get<double>();
        m.meta.max_violation = meta.at("max_violation").get<double>();
        m.meta.support_vectors = meta.at("support_vectors").get<std::size_t>();
        m.meta.converged = meta.at("converged").get<bool>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed SVM model: ") + e.what());
    }
}

}  // namespace polarity
