#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "polarity/naive_bayes.hpp"
#include "polarity/vectorize.hpp"

namespace polarity {

struct SvmOptions {
    std::optional<double> C;  // unset: default_C(training vectors)
    double tol = 1e-3;
    std::size_t max_epochs = 1000;  // one epoch = n working-set updates
    std::optional<std::uint64_t> shuffle_seed;  // permute example order before solving
    std::size_t cache_mb = 256;  // kernel row cache
};

struct SvmTrainingMeta {
    std::size_t iterations = 0;
    double epochs = 0;
    double objective = 0;  // dual objective being minimised: 1/2 a'Qa - e'a
    double primal = 0;     // 1/2 |w|^2 + C * sum hinge
    double duality_gap = 0;
    double hinge_loss = 0;
    double max_violation = 0;
    std::size_t support_vectors = 0;
    bool converged = true;
    std::vector<double> objective_trace;  // dual objective after each epoch, then the final value
    std::vector<double> alpha;  // dual coefficients in input order; not serialized
};

struct LinearSvmModel {
    static constexpr int kFormatVersion = 1;

    std::vector<double> weights;
    double bias = 0;
    double C = 1;
    double tol = 1e-3;
    SvmTrainingMeta meta;

    double decision(const SparseVector& v) const;

    nlohmann::json to_json() const;
    static LinearSvmModel from_json(const nlohmann::json& j);
};

/// 1 / mean |x|^2 over the training vectors. Throws DataError if every vector is zero.
double default_C(std::span<const SparseVector> vectors);

/// L1-loss soft-margin dual with an unregularised bias, solved by SMO with
/// second-order working-set selection. Non-convergence within max_epochs is
/// reported through meta.converged; the last iterate is returned.
LinearSvmModel train_svm(std::span<const SparseVector> vectors, std::size_t dim, const SvmOptions& opts = {});

/// label = sign(w.x + b), a zero score maps to Positive.
Prediction predict_svm(const LinearSvmModel& model, const SparseVector& v);

/// Per training point: y_i (w.x_i + b). Useful for KKT checks.
std::vector<double> training_margins(const LinearSvmModel& model, std::span<const SparseVector> vectors);

}  // namespace polarity
