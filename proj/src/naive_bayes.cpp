#include "polarity/naive_bayes.hpp"

#include <cmath>

#include "polarity/error.hpp"

namespace polarity {

NaiveBayesModel train_nb(std::span<const SparseVector> vectors, std::size_t vocab_size) {
    if (vocab_size == 0) throw DataError("naive Bayes needs a non-empty vocabulary");
    std::array<std::size_t, 2> docs{};
    std::array<std::vector<double>, 2> counts{std::vector<double>(vocab_size, 0.0),
                                              std::vector<double>(vocab_size, 0.0)};
    std::array<double, 2> mass{};
    for (const auto& v : vectors) {
        if (!v.label) throw DataError("naive Bayes training vector without a label");
        const auto c = class_index(*v.label);
        ++docs[c];
        for (const auto& [id, value] : v.entries) {
            if (id >= vocab_size) throw DataError("feature id " + std::to_string(id) + " outside the vocabulary");
            counts[c][id] += value;
            mass[c] += value;
        }
    }
    if (docs[0] == 0 || docs[1] == 0) throw DataError("naive Bayes training set has a single class");

    NaiveBayesModel m;
    m.vocab_size = vocab_size;
    const double n = static_cast<double>(docs[0] + docs[1]);
    for (std::size_t c = 0; c < 2; ++c) {
        m.class_log_prior[c] = std::log(static_cast<double>(docs[c]) / n);
        const double denom = std::log(mass[c] + static_cast<double>(vocab_size));
        auto& ll = m.feature_log_likelihood[c];
        ll.resize(vocab_size);
        for (std::size_t f = 0; f < vocab_size; ++f) ll[f] = std::log(counts[c][f] + 1.0) - denom;
    }
    return m;
}

Prediction predict_nb(const NaiveBayesModel& model, const SparseVector& v) {
    double neg = model.class_log_prior[0];
    double pos = model.class_log_prior[1];
    for (const auto& [id, value] : v.entries) {
        if (id >= model.vocab_size) continue;
        neg += value * model.feature_log_likelihood[0][id];
        pos += value * model.feature_log_likelihood[1][id];
    }
    const double odds = pos - neg;
    return Prediction{odds >= 0 ? Label::Positive : Label::Negative, odds};
}

nlohmann::json NaiveBayesModel::to_json() const {
    return nlohmann::json{{"type", "naive_bayes"},
                          {"version", kFormatVersion},
                          {"vocab_size", vocab_size},
                          {"class_log_prior", {{"neg", class_log_prior[0]}, {"pos", class_log_prior[1]}}},
                          {"feature_log_likelihood",
                           {{"neg", feature_log_likelihood[0]}, {"pos", feature_log_likelihood[1]}}}};
}

NaiveBayesModel NaiveBayesModel::from_json(const nlohmann::json& j) {
    try {
        if (j.at("type") != "naive_bayes") throw DataError("model is not a naive Bayes model");
        if (j.at("version").get<int>() != kFormatVersion) throw DataError("unsupported naive Bayes model version");
        NaiveBayesModel m;
        m.vocab_size = j.at("vocab_size").get<std::size_t>();
        m.class_log_prior = {j.at("class_log_prior").at("neg").get<double>(),
                             j.at("class_log_prior").at("pos").get<double>()};
        m.feature_log_likelihood[0] = j.at("feature_log_likelihood").at("neg").get<std::vector<double>>();
        m.feature_log_likelihood[1] = j.at("feature_log_likelihood").at("pos").get<std::vector<double>>();
        if (m.feature_log_likelihood[0].size() != m.vocab_size ||
            m.feature_log_likelihood[1].size() != m.vocab_size)
            throw DataError("naive Bayes likelihood arrays do not match vocab_size");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed naive Bayes model: ") + e.what());
    }
}

}  // namespace polarity
