#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polarity/corpus.hpp"
#include "polarity/features.hpp"
#include "polarity/linear_svm.hpp"
#include "polarity/naive_bayes.hpp"
#include "polarity/preprocess.hpp"
#include "polarity/vectorize.hpp"

namespace polarity {

enum class Classifier { NaiveBayes, Svm };
std::string_view to_string(Classifier c);
Classifier parse_classifier(std::string_view text);

enum class PruneScope { Fold, Corpus };
std::string_view to_string(PruneScope s);
PruneScope parse_prune_scope(std::string_view text);

struct ExperimentConfig {
    FeatureSpec features;  // features.negation selects the NOT_-tagged corpus
    Representation representation = Representation::Presence;
    Classifier classifier = Classifier::Svm;
    PruneScope prune_scope = PruneScope::Fold;
    std::uint64_t seed = 1;
    std::uint32_t min_count = kDefaultMinCount;
    bool shuffle_labels = false;  // control run: training labels permuted per fold
    std::optional<double> C;
    double tol = 1e-3;
    std::size_t max_epochs = 1000;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// FNV-1a 64 of the canonical JSON, 16 hex digits.
    std::string hash() const;
};

/// "Unigram(Non-Neg)", "Bigram", "U+PU+PB", "3AdjAdv+T", ...
std::string display_name(const FeatureSpec& spec);

struct EvalReport {
    static constexpr int kSchemaVersion = 1;

    ExperimentConfig config;
    std::string config_hash;
    std::string status = "ok";  // ok | skipped | error
    std::string message;
    std::array<double, kNumFolds> fold_accuracies{};
    double mean_accuracy = 0;
    std::uint64_t feature_count = 0;  // corpus scope: vocabulary size; fold scope: rounded mean
    double precision = 0;  // positive class, pooled over folds
    double recall = 0;
    bool converged = true;  // every SVM fold met its tolerance
    double wall_time = 0;

    bool ok() const { return status == "ok"; }
    nlohmann::json to_json() const;
};

/// Shared state for a series of experiments over one corpus: resources and
/// lazily built, thread-safe caches of preprocessed documents and extracted
/// per-family features.
class ExperimentContext {
public:
    ExperimentContext(const Corpus& corpus, PreprocessConfig base, FeatureResources resources,
                      unsigned jobs = 1);
    ~ExperimentContext();

    const Corpus& corpus() const { return corpus_; }
    const FeatureResources& resources() const { return resources_; }
    unsigned jobs() const { return jobs_; }

    const std::vector<Document>& documents(bool negation);

    /// Interned per-document feature counts for one family.
    struct FamilyTable {
        std::vector<std::string> names;
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> docs;  // sorted by local id
    };
    const FamilyTable& family(FeatureFamily f, bool negation);

    /// Builds every cache a config needs (throws ConfigError for missing resources).
    void prepare(const ExperimentConfig& cfg);

private:
    const Corpus& corpus_;
    PreprocessConfig base_;
    FeatureResources resources_;
    unsigned jobs_;
    std::mutex mutex_;
    std::map<bool, std::unique_ptr<std::vector<Document>>> docs_;
    std::map<std::pair<FeatureFamily, bool>, std::unique_ptr<FamilyTable>> tables_;
};

/// Throws ConfigError when the corpus has no folds or a needed resource is missing.
EvalReport run_experiment(ExperimentContext& ctx, const ExperimentConfig& cfg);

/// Vocabulary and trained model for fold k (trained on every other fold), as
/// {"vocabulary": [...], "model": {...}}. Exposed so leakage can be checked.
nlohmann::json train_fold_model(ExperimentContext& ctx, const ExperimentConfig& cfg, int fold);

using ReportCallback = std::function<void(std::size_t index, const EvalReport& report)>;

/// Runs every config (up to `jobs` at once); per-config errors become reports
/// with status "error" or "skipped". The callback fires as each cell finishes,
/// serialised; the returned reports follow config order.
std::vector<EvalReport> run_grid(ExperimentContext& ctx, const std::vector<ExperimentConfig>& configs,
                                 unsigned jobs = 1, const ReportCallback& on_report = {});

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat parse_report_format(std::string_view text);

inline constexpr std::string_view kCsvHeader =
    "config_hash,features,negation,representation,classifier,fold0,fold1,fold2,fold3,fold4,mean,feature_count";

std::string csv_row(const EvalReport& r);

/// JSON: {"schema_version", "reports": [...]}. CSV: header + one row per ok report.
/// Markdown: rows = feature sets, columns = classifier x representation, best cell per row bold.
void emit_report(std::ostream& out, const std::vector<EvalReport>& reports, ReportFormat format);

/// Markdown comparison of our cells against external reference accuracies
/// ({"rows": [{"features", "negation", "nb_presence", ...}]}).
std::string deviation_summary(const std::vector<EvalReport>& reports, const nlohmann::json& reference);

}  // namespace polarity
