#include "polarity/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>
#include <unordered_map>

#include "polarity/error.hpp"
#include "polarity/random.hpp"

namespace polarity {

std::string_view to_string(Classifier c) { return c == Classifier::NaiveBayes ? "nb" : "svm"; }

Classifier parse_classifier(std::string_view text) {
    if (text == "nb" || text == "naive-bayes" || text == "naivebayes") return Classifier::NaiveBayes;
    if (text == "svm") return Classifier::Svm;
    throw ConfigError("unknown classifier '" + std::string(text) + "' (expected nb or svm)");
}

std::string_view to_string(PruneScope s) { return s == PruneScope::Fold ? "fold" : "corpus"; }

PruneScope parse_prune_scope(std::string_view text) {
    if (text == "fold") return PruneScope::Fold;
    if (text == "corpus") return PruneScope::Corpus;
    throw ConfigError("unknown prune scope '" + std::string(text) + "' (expected fold or corpus)");
}

nlohmann::json ExperimentConfig::to_json() const {
    return nlohmann::json{{"features", features.to_string()},
                          {"negation", features.negation},
                          {"representation", to_string(representation)},
                          {"classifier", to_string(classifier)},
                          {"prune_scope", to_string(prune_scope)},
                          {"seed", seed},
                          {"min_count", min_count},
                          {"shuffle_labels", shuffle_labels},
                          {"C", C ? nlohmann::json(*C) : nlohmann::json(nullptr)},
                          {"tol", tol},
                          {"max_epochs", max_epochs}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.features = FeatureSpec::parse(j.at("features").get<std::string>(), j.value("negation", false));
        c.representation = parse_representation(j.value("representation", "presence"));
        c.classifier = parse_classifier(j.value("classifier", "svm"));
        c.prune_scope = parse_prune_scope(j.value("prune_scope", "fold"));
        c.seed = j.value("seed", std::uint64_t{1});
        c.min_count = j.value("min_count", kDefaultMinCount);
        c.shuffle_labels = j.value("shuffle_labels", false);
        if (j.contains("C") && !j["C"].is_null()) c.C = j["C"].get<double>();
        c.tol = j.value("tol", 1e-3);
        c.max_epochs = j.value("max_epochs", std::size_t{1000});
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : to_json().dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string display_name(const FeatureSpec& spec) {
    std::string name;
    if (spec.families.size() == 1) {
        switch (spec.families.front()) {
            case FeatureFamily::Unigram: name = "Unigram"; break;
            case FeatureFamily::Bigram: name = "Bigram"; break;
            case FeatureFamily::Trigram: name = "Trigram"; break;
            case FeatureFamily::PolarizedUnigram: name = "Polarized Unigram"; break;
            case FeatureFamily::PolarizedBigram: name = "Polarized Bigram"; break;
            case FeatureFamily::Adjective: name = "Adjective"; break;
            case FeatureFamily::AdjAdvBigram: name = "Adjective/Adverb"; break;
            case FeatureFamily::AdjAdvTrigram: name = "Adjective/Adverb Trigram"; break;
            case FeatureFamily::Transition: name = "Transition"; break;
        }
    } else {
        for (auto f : spec.families) {
            if (!name.empty()) name += '+';
            switch (f) {
                case FeatureFamily::Unigram: name += "U"; break;
                case FeatureFamily::Bigram: name += "Bigram"; break;
                case FeatureFamily::Trigram: name += "Trigram"; break;
                case FeatureFamily::PolarizedUnigram: name += "PU"; break;
                case FeatureFamily::PolarizedBigram: name += "PB"; break;
                case FeatureFamily::Adjective: name += "Adj"; break;
                case FeatureFamily::AdjAdvBigram: name += "AdjAdv"; break;
                case FeatureFamily::AdjAdvTrigram: name += "3AdjAdv"; break;
                case FeatureFamily::Transition: name += "T"; break;
            }
        }
    }
    if (spec.contains(FeatureFamily::Unigram))
        name += spec.negation ? "(Neg)" : "(Non-Neg)";
    else if (spec.negation)
        name += "(Neg)";
    return name;
}

nlohmann::json EvalReport::to_json() const {
    return nlohmann::json{{"config", config.to_json()},
                          {"config_hash", config_hash},
                          {"display_name", display_name(config.features)},
                          {"status", status},
                          {"message", message},
                          {"fold_accuracies", fold_accuracies},
                          {"mean_accuracy", mean_accuracy},
                          {"feature_count", feature_count},
                          {"precision", precision},
                          {"recall", recall},
                          {"converged", converged},
                          {"wall_time", wall_time}};
}

// ---------------------------------------------------------------------------

ExperimentContext::ExperimentContext(const Corpus& corpus, PreprocessConfig base, FeatureResources resources,
                                     unsigned jobs)
    : corpus_(corpus), base_(std::move(base)), resources_(resources), jobs_(std::max(1u, jobs)) {}

ExperimentContext::~ExperimentContext() = default;

const std::vector<Document>& ExperimentContext::documents(bool negation) {
    std::lock_guard lock(mutex_);
    auto& slot = docs_[negation];
    if (!slot) {
        auto cfg = base_;
        cfg.apply_negation = negation;
        slot = std::make_unique<std::vector<Document>>(preprocess_corpus(corpus_, cfg, jobs_));
    }
    return *slot;
}

const ExperimentContext::FamilyTable& ExperimentContext::family(FeatureFamily f, bool negation) {
    const auto& docs = documents(negation);
    std::lock_guard lock(mutex_);
    auto& slot = tables_[{f, negation}];
    if (!slot) {
        auto table = std::make_unique<FamilyTable>();
        std::unordered_map<std::string, std::uint32_t> intern;
        table->docs.resize(docs.size());
        for (std::size_t d = 0; d < docs.size(); ++d) {
            const auto bag = extract_family(docs[d], f, resources_);
            auto& row = table->docs[d];
            row.reserve(bag.size());
            for (const auto& [name, count] : bag) {
                auto [it, fresh] = intern.try_emplace(name, static_cast<std::uint32_t>(table->names.size()));
                if (fresh) table->names.push_back(name);
                row.emplace_back(it->second, count);
            }
            std::sort(row.begin(), row.end());
        }
        slot = std::move(table);
    }
    return *slot;
}

void ExperimentContext::prepare(const ExperimentConfig& cfg) {
    if (cfg.features.families.empty()) throw ConfigError("feature spec names no families");
    if (cfg.features.requires_lexicon() && !resources_.lexicon)
        throw ConfigError("features '" + cfg.features.to_string() + "' need a subjectivity lexicon");
    if (cfg.features.requires_transitions() && !resources_.transitions)
        throw ConfigError("features '" + cfg.features.to_string() + "' need a transition list");
    for (auto f : cfg.features.families) family(f, cfg.features.negation);
}

// ---------------------------------------------------------------------------

namespace {

struct VocabMapping {
    std::vector<std::vector<std::int64_t>> local_to_id;  // per family, -1 when pruned
    std::vector<std::string_view> names;                 // by vocabulary id
    std::size_t size = 0;
};

VocabMapping build_mapping(const std::vector<const ExperimentContext::FamilyTable*>& tables,
                           const std::vector<bool>& in_scope, std::uint32_t min_count) {
    struct Kept {
        std::string_view name;
        std::size_t family;
        std::uint32_t local;
    };
    std::vector<Kept> kept;
    VocabMapping m;
    for (std::size_t f = 0; f < tables.size(); ++f) {
        const auto& t = *tables[f];
        std::vector<std::uint64_t> totals(t.names.size(), 0);
        for (std::size_t d = 0; d < t.docs.size(); ++d)
            if (in_scope[d])
                for (const auto& [id, c] : t.docs[d]) totals[id] += c;
        for (std::uint32_t id = 0; id < totals.size(); ++id)
            if (totals[id] >= min_count) kept.push_back(Kept{t.names[id], f, id});
        m.local_to_id.emplace_back(t.names.size(), -1);
    }
    if (kept.empty()) throw DataError("vocabulary is empty after pruning at min_count " + std::to_string(min_count));
    std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < kept.size(); ++i) {
        m.local_to_id[kept[i].family][kept[i].local] = static_cast<std::int64_t>(i);
        m.names.push_back(kept[i].name);
    }
    m.size = kept.size();
    return m;
}

std::vector<SparseVector> build_vectors(const std::vector<const ExperimentContext::FamilyTable*>& tables,
                                        const VocabMapping& m, Representation rep, const Corpus& corpus) {
    const auto n = corpus.size();
    std::vector<SparseVector> out(n);
    for (std::size_t d = 0; d < n; ++d) {
        auto& v = out[d];
        v.label = corpus.documents()[d].label;
        for (std::size_t f = 0; f < tables.size(); ++f)
            for (const auto& [local, c] : tables[f]->docs[d]) {
                const auto id = m.local_to_id[f][local];
                if (id < 0) continue;
                v.entries.emplace_back(static_cast<std::uint32_t>(id),
                                       rep == Representation::Presence ? 1.0 : static_cast<double>(c));
            }
        std::sort(v.entries.begin(), v.entries.end());
    }
    return out;
}

struct Trained {
    std::optional<NaiveBayesModel> nb;
    std::optional<LinearSvmModel> svm;

    Prediction predict(const SparseVector& v) const { return nb ? predict_nb(*nb, v) : predict_svm(*svm, v); }
};

std::vector<bool> training_mask(const Corpus& corpus, int fold) {
    std::vector<bool> mask(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) mask[d] = corpus.fold_of(d) != fold;
    return mask;
}

Trained train_fold(const ExperimentConfig& cfg, const std::vector<SparseVector>& vectors,
                   const std::vector<bool>& train_mask, std::size_t dim, int fold) {
    std::vector<SparseVector> train;
    for (std::size_t d = 0; d < vectors.size(); ++d)
        if (train_mask[d]) train.push_back(vectors[d]);
    if (cfg.shuffle_labels) {
        std::vector<std::optional<Label>> labels;
        for (const auto& v : train) labels.push_back(v.label);
        seeded_shuffle(labels, derive_seed(cfg.seed, static_cast<std::uint64_t>(fold)));
        for (std::size_t i = 0; i < train.size(); ++i) train[i].label = labels[i];
    }
    Trained t;
    if (cfg.classifier == Classifier::NaiveBayes) {
        t.nb = train_nb(train, dim);
    } else {
        SvmOptions opts;
        opts.C = cfg.C;
        opts.tol = cfg.tol;
        opts.max_epochs = cfg.max_epochs;
        t.svm = train_svm(train, dim, opts);
    }
    return t;
}

std::vector<const ExperimentContext::FamilyTable*> family_tables(ExperimentContext& ctx,
                                                                 const ExperimentConfig& cfg) {
    if (!ctx.corpus().has_folds()) throw ConfigError("corpus has no fold assignment");
    if (cfg.min_count == 0) throw ConfigError("min_count must be at least 1");
    ctx.prepare(cfg);
    std::vector<const ExperimentContext::FamilyTable*> tables;
    for (auto f : cfg.features.families) tables.push_back(&ctx.family(f, cfg.features.negation));
    return tables;
}

}  // namespace

nlohmann::json train_fold_model(ExperimentContext& ctx, const ExperimentConfig& cfg, int fold) {
    if (fold < 0 || fold >= kNumFolds) throw ConfigError("fold index out of range");
    const auto tables = family_tables(ctx, cfg);
    const auto& corpus = ctx.corpus();
    const auto mask = training_mask(corpus, fold);
    const auto m = build_mapping(tables, cfg.prune_scope == PruneScope::Corpus ? std::vector<bool>(corpus.size(), true)
                                                                              : mask,
                                 cfg.min_count);
    const auto vectors = build_vectors(tables, m, cfg.representation, corpus);
    const auto t = train_fold(cfg, vectors, mask, m.size, fold);
    return nlohmann::json{{"vocabulary", m.names}, {"model", t.nb ? t.nb->to_json() : t.svm->to_json()}};
}

EvalReport run_experiment(ExperimentContext& ctx, const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    const auto tables = family_tables(ctx, cfg);
    const auto& corpus = ctx.corpus();
    const auto n = corpus.size();

    EvalReport report;
    report.config = cfg;
    report.config_hash = cfg.hash();

    std::optional<std::vector<SparseVector>> shared;
    std::size_t shared_dim = 0;
    std::uint64_t feature_total = 0;
    if (cfg.prune_scope == PruneScope::Corpus) {
        const auto m = build_mapping(tables, std::vector<bool>(n, true), cfg.min_count);
        shared_dim = m.size;
        shared = build_vectors(tables, m, cfg.representation, corpus);
    }

    std::size_t tp = 0, fp = 0, fn = 0;
    for (int k = 0; k < kNumFolds; ++k) {
        const auto mask = training_mask(corpus, k);
        std::vector<SparseVector> local;
        std::size_t dim = shared_dim;
        if (!shared) {
            const auto m = build_mapping(tables, mask, cfg.min_count);
            dim = m.size;
            local = build_vectors(tables, m, cfg.representation, corpus);
        }
        feature_total += dim;
        const auto& vectors = shared ? *shared : local;

        const auto model = train_fold(cfg, vectors, mask, dim, k);
        if (model.svm) report.converged = report.converged && model.svm->meta.converged;

        std::size_t correct = 0, tested = 0;
        for (std::size_t d = 0; d < n; ++d) {
            if (mask[d]) continue;
            ++tested;
            const auto truth = *vectors[d].label;
            const auto guess = model.predict(vectors[d]).label;
            correct += guess == truth;
            if (guess == Label::Positive && truth == Label::Positive) ++tp;
            if (guess == Label::Positive && truth == Label::Negative) ++fp;
            if (guess == Label::Negative && truth == Label::Positive) ++fn;
        }
        if (tested == 0) throw DataError("fold " + std::to_string(k) + " is empty");
        report.fold_accuracies[static_cast<std::size_t>(k)] =
            static_cast<double>(correct) / static_cast<double>(tested);
    }

    double sum = 0;
    for (double a : report.fold_accuracies) sum += a;
    report.mean_accuracy = sum / kNumFolds;
    report.feature_count = (feature_total + kNumFolds / 2) / kNumFolds;
    report.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    report.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<EvalReport> run_grid(ExperimentContext& ctx, const std::vector<ExperimentConfig>& configs,
                                 unsigned jobs, const ReportCallback& on_report) {
    if (configs.empty()) throw ConfigError("experiment grid is empty");
    std::vector<EvalReport> reports(configs.size());
    std::mutex emit_mutex;

    auto run_one = [&](std::size_t i) {
        const auto& cfg = configs[i];
        EvalReport r;
        const auto& res = ctx.resources();
        if (cfg.features.requires_lexicon() && !res.lexicon) {
            r.config = cfg;
            r.config_hash = cfg.hash();
            r.status = "skipped";
            r.message = "no subjectivity lexicon loaded";
        } else if (cfg.features.requires_transitions() && !res.transitions) {
            r.config = cfg;
            r.config_hash = cfg.hash();
            r.status = "skipped";
            r.message = "no transition list loaded";
        } else {
            try {
                r = run_experiment(ctx, cfg);
            } catch (const std::exception& e) {
                r = EvalReport{};
                r.config = cfg;
                r.config_hash = cfg.hash();
                r.status = "error";
                r.message = e.what();
            }
        }
        std::lock_guard lock(emit_mutex);
        reports[i] = r;
        if (on_report) on_report(i, reports[i]);
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) run_one(i);
        return reports;
    }
    // Fill the caches up front so concurrent cells only read them.
    for (const auto& cfg : configs) {
        try {
            ctx.prepare(cfg);
        } catch (const Error&) {
            // reported per cell
        }
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
            });
    }
    return reports;
}

// ---------------------------------------------------------------------------

ReportFormat parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::Json;
    if (text == "csv") return ReportFormat::Csv;
    if (text == "markdown" || text == "md") return ReportFormat::Markdown;
    throw ConfigError("unknown report format '" + std::string(text) + "' (expected json, csv or markdown)");
}

namespace {

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Cell {
    Classifier clf;
    Representation rep;
    std::string_view title;
};

constexpr Cell kColumns[] = {
    {Classifier::NaiveBayes, Representation::Presence, "NB Presence"},
    {Classifier::NaiveBayes, Representation::Frequency, "NB Frequency"},
    {Classifier::Svm, Representation::Presence, "SVM Presence"},
    {Classifier::Svm, Representation::Frequency, "SVM Frequency"},
};

std::string_view column_key(Classifier clf, Representation rep) {
    if (clf == Classifier::NaiveBayes) return rep == Representation::Presence ? "nb_presence" : "nb_frequency";
    return rep == Representation::Presence ? "svm_presence" : "svm_frequency";
}

}  // namespace

std::string csv_row(const EvalReport& r) {
    std::string row = r.config_hash;
    row += ',' + r.config.features.to_string();
    row += ',' + std::string(r.config.features.negation ? "true" : "false");
    row += ',' + std::string(to_string(r.config.representation));
    row += ',' + std::string(to_string(r.config.classifier));
    for (double a : r.fold_accuracies) row += ',' + fixed(a);
    row += ',' + fixed(r.mean_accuracy);
    row += ',' + std::to_string(r.feature_count);
    return row;
}

void emit_report(std::ostream& out, const std::vector<EvalReport>& reports, ReportFormat format) {
    if (reports.empty()) throw ConfigError("no reports to emit");
    switch (format) {
        case ReportFormat::Json: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : reports) arr.push_back(r.to_json());
            out << nlohmann::json{{"schema_version", EvalReport::kSchemaVersion}, {"reports", arr}}.dump(2) << '\n';
            return;
        }
        case ReportFormat::Csv:
            out << kCsvHeader << '\n';
            for (const auto& r : reports)
                if (r.ok()) out << csv_row(r) << '\n';
            return;
        case ReportFormat::Markdown: {
            struct Row {
                std::string name;
                std::map<std::string_view, const EvalReport*> cells;
                std::uint64_t features = 0;
            };
            std::vector<Row> rows;
            for (const auto& r : reports) {
                auto name = display_name(r.config.features);
                auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& x) { return x.name == name; });
                if (it == rows.end()) {
                    rows.push_back(Row{name, {}, 0});
                    it = std::prev(rows.end());
                }
                it->cells[column_key(r.config.classifier, r.config.representation)] = &r;
                if (r.ok()) it->features = std::max(it->features, r.feature_count);
            }
            out << "| No. | Features | # of features |";
            for (const auto& c : kColumns) out << ' ' << c.title << " |";
            out << "\n|---|---|---:|---:|---:|---:|---:|\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& row = rows[i];
                double best = -1;
                for (const auto& [key, r] : row.cells)
                    if (r->ok()) best = std::max(best, std::round(r->mean_accuracy * 1000) / 1000);
                out << "| " << i + 1 << " | " << row.name << " | " << row.features << " |";
                for (const auto& c : kColumns) {
                    auto it = row.cells.find(column_key(c.clf, c.rep));
                    if (it == row.cells.end()) {
                        out << " - |";
                    } else if (!it->second->ok()) {
                        out << ' ' << it->second->status << " |";
                    } else {
                        const double v = std::round(it->second->mean_accuracy * 1000) / 1000;
                        const auto text = fixed(v, 3);
                        out << ' ' << (v == best ? "**" + text + "**" : text) << " |";
                    }
                }
                out << '\n';
            }
            return;
        }
    }
}

std::string deviation_summary(const std::vector<EvalReport>& reports, const nlohmann::json& reference) {
    std::string out = "| Features | Cell | Reference | Ours | Delta |\n|---|---|---:|---:|---:|\n";
    double abs_sum = 0;
    std::size_t compared = 0, missing = 0;
    for (const auto& row : reference.at("rows")) {
        const auto spec = FeatureSpec::parse(row.at("features").get<std::string>(), row.value("negation", false));
        for (const auto& c : kColumns) {
            const auto key = std::string(column_key(c.clf, c.rep));
            if (!row.contains(key)) continue;
            const double target = row[key].get<double>();
            const EvalReport* match = nullptr;
            for (const auto& r : reports)
                if (r.ok() && r.config.features == spec && r.config.classifier == c.clf &&
                    r.config.representation == c.rep)
                    match = &r;
            out += "| " + display_name(spec) + " | " + std::string(c.title) + " | " + fixed(target, 3) + " | ";
            if (!match) {
                ++missing;
                out += "- | - |\n";
                continue;
            }
            const double delta = match->mean_accuracy - target;
            abs_sum += std::abs(delta);
            ++compared;
            out += fixed(match->mean_accuracy, 3) + " | " + (delta >= 0 ? "+" : "") + fixed(delta, 3) + " |\n";
        }
    }
    out += "\nCells compared: " + std::to_string(compared) + ", not run: " + std::to_string(missing);
    if (compared) out += ", mean |delta|: " + fixed(abs_sum / static_cast<double>(compared), 3);
    out += '\n';
    return out;
}

}  // namespace polarity
