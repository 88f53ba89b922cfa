#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "polarity/vectorize.hpp"

namespace polarity {

struct Prediction {
    Label label = Label::Positive;
    double score = 0;  // log-odds for NB, signed margin for the SVM
};

/// Multinomial NB over vector values with add-one smoothing, in log space.
/// Class index 0 is Negative, 1 is Positive.
struct NaiveBayesModel {
    static constexpr int kFormatVersion = 1;

    std::array<double, 2> class_log_prior{};
    std::array<std::vector<double>, 2> feature_log_likelihood;
    std::size_t vocab_size = 0;

    nlohmann::json to_json() const;
    static NaiveBayesModel from_json(const nlohmann::json& j);
};

inline std::size_t class_index(Label label) { return label == Label::Positive ? 1 : 0; }

/// Throws DataError when a vector is unlabeled, an id is out of range, or only one class is present.
NaiveBayesModel train_nb(std::span<const SparseVector> vectors, std::size_t vocab_size);

/// Ties go to Positive. Ids outside the model's vocabulary are ignored.
Prediction predict_nb(const NaiveBayesModel& model, const SparseVector& v);

}  // namespace polarity
