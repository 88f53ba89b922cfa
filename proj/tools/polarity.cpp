// polarity: command-line front end for the sentiment-polarity toolkit.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "polarity/corpus.hpp"
#include "polarity/error.hpp"
#include "polarity/eval.hpp"
#include "polarity/features.hpp"
#include "polarity/lexicon.hpp"
#include "polarity/linear_svm.hpp"
#include "polarity/naive_bayes.hpp"
#include "polarity/preprocess.hpp"
#include "polarity/tagger.hpp"
#include "polarity/vectorize.hpp"

#ifndef POLARITY_DEFAULT_DATA
#define POLARITY_DEFAULT_DATA ""
#endif

namespace fs = std::filesystem;
using namespace polarity;
using nlohmann::json;

namespace {

constexpr int kModelSchema = 1;

struct Common {
    std::string data;
    std::string negation = "off";
    std::string tagger = "builtin";
    std::string tagger_lexicon;
    std::string tagger_rules;
    std::string lexicon;
    std::string lexicon_format = "tff";
    std::string transitions;
    std::string folds = "filename";
    std::uint64_t fold_seed = 1;
    std::string format = "text";
    unsigned jobs = 1;
};

struct Model {
    std::string features = "unigram";
    std::string representation = "presence";
    std::string classifier = "svm";
    std::uint32_t min_count = kDefaultMinCount;
    std::optional<double> C;
    double tol = 1e-3;
    std::size_t max_epochs = 1000;
};

bool parse_on_off(const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("expected on or off, got '" + v + "'");
}

fs::path data_root(const Common& c) {
    if (!c.data.empty()) return c.data;
    if (const char* env = std::getenv("POLARITY_DATA_DIR"); env && *env) return env;
    throw ConfigError("no corpus given: pass --data <dir> or set POLARITY_DATA_DIR");
}

PreprocessConfig preprocess_config(const Common& c) {
    PreprocessConfig cfg;
    cfg.apply_negation = parse_on_off(c.negation);
    if (c.tagger == "builtin")
        cfg.tagger = make_builtin_tagger(c.tagger_lexicon, c.tagger_rules);
    else if (c.tagger == "pretagged")
        cfg.tagger = std::make_shared<PretaggedReader>();
    else
        throw ConfigError("unknown tagger '" + c.tagger + "' (expected builtin or pretagged)");
    return cfg;
}

struct Resources {
    std::optional<SubjectivityLexicon> lexicon;
    std::optional<TransitionList> transitions;

    FeatureResources view() const {
        return FeatureResources{lexicon ? &*lexicon : nullptr, transitions ? &*transitions : nullptr};
    }
};

// An empty --transitions means the shipped default list; "none" disables transitions.
Resources load_resources(const Common& c) {
    Resources r;
    if (!c.lexicon.empty()) r.lexicon = load_lexicon(c.lexicon, parse_lexicon_format(c.lexicon_format));
    if (c.transitions == "none")
        ;
    else if (!c.transitions.empty())
        r.transitions = load_transitions(c.transitions);
    else
        r.transitions = default_transitions();
    return r;
}

Corpus load_with_folds(const Common& c) {
    auto corpus = load_corpus(data_root(c));
    return assign_folds(std::move(corpus), parse_fold_mode(c.folds), c.fold_seed);
}

void add_corpus_options(CLI::App* app, Common& c, bool folds) {
    app->add_option("--data", c.data, "Corpus root with pos/ and neg/ (default: $POLARITY_DATA_DIR)");
    app->add_option("--negation", c.negation, "NOT_ tagging: on|off")->capture_default_str();
    app->add_option("--tagger", c.tagger, "POS tagger: builtin|pretagged (word_TAG input)")->capture_default_str();
    app->add_option("--tagger-lexicon", c.tagger_lexicon, "Extra tagger lexicon (\"word TAG\" lines)");
    app->add_option("--tagger-rules", c.tagger_rules, "Extra contextual rules (\"FROM TO TEMPLATE args\" lines)");
    if (folds) {
        app->add_option("--folds", c.folds, "Fold assignment: filename (cvNNN ids) | stratified")->capture_default_str();
        app->add_option("--fold-seed", c.fold_seed, "Seed for --folds stratified")->capture_default_str();
    }
    app->add_option("--format", c.format, "Output format: text|json")->capture_default_str();
    app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

void add_resource_options(CLI::App* app, Common& c) {
    app->add_option("--lexicon", c.lexicon, "Subjectivity lexicon (needed by pu, pb, t)");
    app->add_option("--lexicon-format", c.lexicon_format, "Lexicon format: tff|tsv")->capture_default_str();
    app->add_option("--transitions", c.transitions, "Transition list file (default: built-in list; 'none' disables)");
}

void add_model_options(CLI::App* app, Model& m, bool svm_options) {
    app->add_option("--features", m.features, "Feature spec, e.g. unigram, unigram+pb+t, 3adjadv+pb")->capture_default_str();
    app->add_option("--rep", m.representation, "Representation: presence|frequency")->capture_default_str();
    app->add_option("--clf", m.classifier, "Classifier: nb|svm")->capture_default_str();
    app->add_option("--min-count", m.min_count, "Term-removal threshold")->capture_default_str();
    if (svm_options) {
        app->add_option("--C", m.C, "SVM soft-margin penalty (default: 1 / mean |x|^2)");
        app->add_option("--tol", m.tol, "SVM KKT / duality-gap tolerance")->capture_default_str();
        app->add_option("--max-epochs", m.max_epochs, "SVM epoch cap (one epoch = n updates)")->capture_default_str();
    }
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------

int cmd_stats(const Common& c) {
    const auto corpus = load_corpus(data_root(c));
    const auto stats = compute_stats(corpus, preprocess_config(c));
    if (c.format == "json") {
        std::cout << stats.to_json().dump(2) << '\n';
    } else {
        std::cout << "label  documents  sentences  words  distinct\n";
        for (auto [name, s] : {std::pair{"pos", stats.pos}, std::pair{"neg", stats.neg}})
            std::cout << name << "  " << s.documents << "  " << s.sentences << "  " << s.words << "  " << s.distinct
                      << '\n';
    }
    return 0;
}

int cmd_extract(const Common& c, const Model& m, const std::string& out_path, std::string vocab_path) {
    const auto spec = FeatureSpec::parse(m.features, parse_on_off(c.negation));
    const auto rep = parse_representation(m.representation);
    const auto res = load_resources(c);
    if (spec.requires_lexicon() && !res.lexicon)
        throw ConfigError("features '" + spec.to_string() + "' need --lexicon");
    const auto corpus = load_corpus(data_root(c));
    auto cfg = preprocess_config(c);
    const auto docs = preprocess_corpus(corpus, cfg, c.jobs);

    std::vector<FeatureBag> bags;
    bags.reserve(docs.size());
    for (const auto& d : docs) bags.push_back(extract(d, spec, res.view()));
    const auto vocab = build_vocabulary(bags, m.min_count);

    std::ostringstream vec;
    vec << "# features=" << spec.to_string() << " negation=" << (spec.negation ? "on" : "off")
        << " representation=" << to_string(rep) << " min_count=" << m.min_count << '\n';
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto v = vectorize(bags[i], vocab, rep);
        v.label = docs[i].label;
        vec << to_svmlight(v) << " # " << docs[i].id << '\n';
    }
    if (vocab_path.empty()) vocab_path = out_path + ".vocab";
    std::ostringstream voc;
    vocab.write(voc);
    write_file(out_path, vec.str());
    write_file(vocab_path, voc.str());
    if (c.format == "json")
        std::cout << json{{"documents", docs.size()}, {"features", vocab.size()}, {"vectors", out_path},
                          {"vocabulary", vocab_path}}
                         .dump(2)
                  << '\n';
    else
        std::cout << docs.size() << " documents, " << vocab.size() << " features -> " << out_path << '\n';
    return 0;
}

ExperimentConfig experiment_config(const Common& c, const Model& m, const std::string& prune, std::uint64_t seed,
                                   bool shuffle_labels) {
    ExperimentConfig cfg;
    cfg.features = FeatureSpec::parse(m.features, parse_on_off(c.negation));
    cfg.representation = parse_representation(m.representation);
    cfg.classifier = parse_classifier(m.classifier);
    cfg.prune_scope = parse_prune_scope(prune);
    cfg.seed = seed;
    cfg.min_count = m.min_count;
    cfg.shuffle_labels = shuffle_labels;
    cfg.C = m.C;
    cfg.tol = m.tol;
    cfg.max_epochs = m.max_epochs;
    return cfg;
}

int cmd_evaluate(const Common& c, const Model& m, const std::string& prune, std::uint64_t seed, bool shuffle,
                 const std::string& out_path) {
    const auto cfg = experiment_config(c, m, prune, seed, shuffle);
    const auto res = load_resources(c);
    if (cfg.features.requires_lexicon() && !res.lexicon)
        throw ConfigError("features '" + cfg.features.to_string() + "' need --lexicon");
    const auto corpus = load_with_folds(c);
    ExperimentContext ctx(corpus, preprocess_config(c), res.view(), c.jobs);
    const auto report = run_experiment(ctx, cfg);
    if (!report.converged) std::cerr << "warning: SVM did not converge within --max-epochs on some fold\n";

    if (!out_path.empty()) {
        std::ostringstream ss;
        const auto ext = fs::path(out_path).extension().string();
        emit_report(ss, {report},
                    ext == ".csv" ? ReportFormat::Csv : ext == ".md" ? ReportFormat::Markdown : ReportFormat::Json);
        write_file(out_path, ss.str());
    }
    if (c.format == "json") {
        std::cout << report.to_json().dump(2) << '\n';
    } else {
        std::cout << display_name(cfg.features) << ' ' << to_string(cfg.classifier) << ' '
                  << to_string(cfg.representation) << " mean accuracy " << report.mean_accuracy << " (folds";
        for (double a : report.fold_accuracies) std::cout << ' ' << a;
        std::cout << "), " << report.feature_count << " features\n";
    }
    return 0;
}

int cmd_train(const Common& c, const Model& m, const std::string& out_path) {
    const auto spec = FeatureSpec::parse(m.features, parse_on_off(c.negation));
    const auto rep = parse_representation(m.representation);
    const auto clf = parse_classifier(m.classifier);
    const auto res = load_resources(c);
    if (spec.requires_lexicon() && !res.lexicon)
        throw ConfigError("features '" + spec.to_string() + "' need --lexicon");
    const auto corpus = load_corpus(data_root(c));
    const auto docs = preprocess_corpus(corpus, preprocess_config(c), c.jobs);

    std::vector<FeatureBag> bags;
    for (const auto& d : docs) bags.push_back(extract(d, spec, res.view()));
    const auto vocab = build_vocabulary(bags, m.min_count);
    std::vector<SparseVector> vectors;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        vectors.push_back(vectorize(bags[i], vocab, rep));
        vectors.back().label = docs[i].label;
    }

    json model;
    if (clf == Classifier::NaiveBayes) {
        model = train_nb(vectors, vocab.size()).to_json();
    } else {
        SvmOptions opts;
        opts.C = m.C;
        opts.tol = m.tol;
        opts.max_epochs = m.max_epochs;
        auto svm = train_svm(vectors, vocab.size(), opts);
        if (!svm.meta.converged) std::cerr << "warning: SVM did not converge within --max-epochs\n";
        model = svm.to_json();
    }
    json bundle{{"schema_version", kModelSchema},
                {"features", spec.to_string()},
                {"negation", spec.negation},
                {"representation", to_string(rep)},
                {"classifier", to_string(clf)},
                {"min_count", m.min_count},
                {"tagger", c.tagger},
                {"vocabulary", vocab.features()},
                {"model", model}};
    write_file(out_path, bundle.dump() + "\n");
    if (c.format == "json")
        std::cout << json{{"documents", docs.size()}, {"features", vocab.size()}, {"model", out_path}}.dump(2) << '\n';
    else
        std::cout << "trained " << to_string(clf) << " on " << docs.size() << " documents, " << vocab.size()
                  << " features -> " << out_path << '\n';
    return 0;
}

struct Input {
    RawDocument doc;
    bool labeled = false;  // came from a pos/ or neg/ directory
};

std::vector<Input> gather_inputs(const std::vector<std::string>& inputs) {
    std::vector<Input> out;
    auto read = [&](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw DataError("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        out.push_back(Input{RawDocument{p.string(), Label::Positive, ss.str()}, false});
    };
    for (const auto& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p / "pos") || fs::is_directory(p / "neg")) {
            const auto corpus = load_corpus(p);
            for (const auto& d : corpus.documents()) out.push_back(Input{d, true});
        } else if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().filename().string()[0] != '.') files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) read(f);
        } else if (fs::is_regular_file(p)) {
            read(p);
        } else {
            throw ConfigError("no such input " + input);
        }
    }
    return out;
}

int cmd_predict(const Common& c, const std::string& model_path, const std::vector<std::string>& inputs) {
    const auto bundle = read_json_file(model_path);
    FeatureSpec spec;
    Representation rep;
    Vocabulary vocab;
    try {
        if (bundle.at("schema_version").get<int>() != kModelSchema) throw DataError("unsupported model schema");
        spec = FeatureSpec::parse(bundle.at("features").get<std::string>(), bundle.at("negation").get<bool>());
        rep = parse_representation(bundle.at("representation").get<std::string>());
        vocab = Vocabulary(bundle.at("vocabulary").get<std::vector<std::string>>(), bundle.at("min_count").get<std::uint32_t>());
    } catch (const json::exception& e) {
        throw DataError(model_path + ": " + e.what());
    } catch (const Error& e) {
        throw DataError(model_path + ": " + e.what());
    }
    const bool nb = bundle.at("classifier") == "nb";
    std::optional<NaiveBayesModel> nb_model;
    std::optional<LinearSvmModel> svm_model;
    if (nb)
        nb_model = NaiveBayesModel::from_json(bundle.at("model"));
    else
        svm_model = LinearSvmModel::from_json(bundle.at("model"));

    const auto res = load_resources(c);
    if (spec.requires_lexicon() && !res.lexicon)
        throw ConfigError("the model uses features '" + spec.to_string() + "' and needs --lexicon");
    auto cfg = preprocess_config(c);
    cfg.apply_negation = spec.negation;

    const auto inputs_read = gather_inputs(inputs);
    if (inputs_read.empty()) throw ConfigError("nothing to predict");
    json out = json::array();
    std::size_t labeled = 0, correct = 0;
    for (const auto& [doc, known] : inputs_read) {
        const auto d = preprocess_document(doc, cfg);
        const auto v = vectorize(extract(d, spec, res.view()), vocab, rep);
        const auto p = nb ? predict_nb(*nb_model, v) : predict_svm(*svm_model, v);
        json item{{"id", doc.id}, {"label", to_string(p.label)}, {"score", p.score}};
        if (known) {
            item["gold"] = to_string(doc.label);
            ++labeled;
            correct += p.label == doc.label;
        }
        out.push_back(item);
        if (c.format != "json") std::cout << doc.id << '\t' << to_string(p.label) << '\t' << p.score << '\n';
    }
    const double accuracy = labeled ? static_cast<double>(correct) / static_cast<double>(labeled) : 0.0;
    if (c.format == "json") {
        json result{{"predictions", out}};
        if (labeled) result["accuracy"] = accuracy;
        std::cout << result.dump(2) << '\n';
    } else if (labeled) {
        std::cerr << "accuracy on " << labeled << " labeled documents: " << accuracy << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct Grid {
    std::string name;
    std::vector<ExperimentConfig> configs;
};

std::vector<ExperimentConfig> four_cells(const std::string& features, bool negation, const ExperimentConfig& base) {
    std::vector<ExperimentConfig> out;
    for (auto clf : {Classifier::NaiveBayes, Classifier::Svm})
        for (auto rep : {Representation::Presence, Representation::Frequency}) {
            auto cfg = base;
            cfg.features = FeatureSpec::parse(features, negation);
            cfg.classifier = clf;
            cfg.representation = rep;
            out.push_back(cfg);
        }
    return out;
}

std::vector<std::string> combos(const std::string& base) {
    std::vector<std::string> out;
    const std::vector<std::string> extras{"pu", "pb", "t"};
    for (unsigned mask = 0; mask < 8; ++mask) {
        std::string spec = base;
        for (unsigned b = 0; b < 3; ++b)
            if (mask & (1u << b)) spec += "+" + extras[b];
        out.push_back(spec);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return std::count(a.begin(), a.end(), '+') < std::count(b.begin(), b.end(), '+'); });
    return out;
}

std::vector<Grid> reproduction_grids(const ExperimentConfig& base, const std::set<std::string>& only) {
    std::vector<Grid> grids;
    auto want = [&](const std::string& name) { return only.empty() || only.count(name); };
    if (want("basic")) {
        Grid g{"basic", {}};
        const std::vector<std::pair<std::string, bool>> rows{
            {"unigram", false}, {"unigram", true}, {"bigram", false},  {"trigram", false}, {"adjadv", false},
            {"adj", false},     {"pb", false},     {"pu", false},      {"3adjadv", false}};
        for (const auto& [f, neg] : rows)
            for (auto& cfg : four_cells(f, neg, base)) g.configs.push_back(cfg);
        grids.push_back(std::move(g));
    }
    if (want("unigram")) {
        Grid g{"unigram_combos", {}};
        for (bool neg : {false, true})
            for (const auto& f : combos("unigram"))
                for (auto& cfg : four_cells(f, neg, base)) g.configs.push_back(cfg);
        grids.push_back(std::move(g));
    }
    if (want("adjadv3")) {
        Grid g{"adjadv3_combos", {}};
        for (const auto& f : combos("3adjadv"))
            for (auto& cfg : four_cells(f, false, base)) g.configs.push_back(cfg);
        grids.push_back(std::move(g));
    }
    return grids;
}

std::string series_name(const EvalReport& r, bool with_negation) {
    std::string s = r.config.classifier == Classifier::NaiveBayes ? "NB" : "SVM";
    s += r.config.representation == Representation::Presence ? "_Presence" : "_Frequency";
    if (with_negation) s += r.config.features.negation ? "_Neg" : "_Non-Neg";
    return s;
}

std::string combo_label(const FeatureSpec& spec) {
    auto copy = spec;
    copy.negation = false;
    auto name = display_name(copy);
    if (auto p = name.find("(Non-Neg)"); p != std::string::npos) name.erase(p);
    if (name == "Unigram") name = "U";
    if (name == "Adjective/Adverb Trigram") name = "3AdjAdv";
    return name;
}

// Plot-ready series,features,accuracy rows for the combination studies.
std::map<std::string, std::string> figure_csvs(const std::vector<EvalReport>& reports) {
    std::map<std::string, std::string> files;
    auto add = [&](const std::string& file, const EvalReport& r, bool with_neg) {
        auto& text = files[file];
        if (text.empty()) text = "series,features,accuracy\n";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", r.mean_accuracy);
        text += series_name(r, with_neg) + "," + combo_label(r.config.features) + "," + buf + "\n";
    };
    for (const auto& r : reports) {
        if (!r.ok()) continue;
        const auto& f = r.config.features;
        const bool unigram_base = f.contains(FeatureFamily::Unigram) &&
                                  std::all_of(f.families.begin(), f.families.end(), [](FeatureFamily x) {
                                      return x == FeatureFamily::Unigram || x == FeatureFamily::PolarizedUnigram ||
                                             x == FeatureFamily::PolarizedBigram || x == FeatureFamily::Transition;
                                  });
        const bool adj3_base = f.contains(FeatureFamily::AdjAdvTrigram) && !f.negation &&
                               std::all_of(f.families.begin(), f.families.end(), [](FeatureFamily x) {
                                   return x == FeatureFamily::AdjAdvTrigram || x == FeatureFamily::PolarizedUnigram ||
                                          x == FeatureFamily::PolarizedBigram || x == FeatureFamily::Transition;
                               });
        if (unigram_base) {
            add(r.config.classifier == Classifier::NaiveBayes ? "unigram_combos_nb.csv" : "unigram_combos_svm.csv", r,
                true);
            if (!f.negation) add("unigram_combos_nonneg.csv", r, false);
        }
        if (adj3_base) add("adjadv3_combos.csv", r, false);
    }
    return files;
}

std::vector<EvalReport> reports_from_json(const json& j) {
    std::vector<EvalReport> out;
    try {
        for (const auto& item : j.at("reports")) {
            EvalReport r;
            r.config = ExperimentConfig::from_json(item.at("config"));
            r.config_hash = item.at("config_hash").get<std::string>();
            r.status = item.at("status").get<std::string>();
            r.message = item.value("message", "");
            r.fold_accuracies = item.at("fold_accuracies").get<std::array<double, kNumFolds>>();
            r.mean_accuracy = item.at("mean_accuracy").get<double>();
            r.feature_count = item.at("feature_count").get<std::uint64_t>();
            r.precision = item.value("precision", 0.0);
            r.recall = item.value("recall", 0.0);
            r.converged = item.value("converged", true);
            r.wall_time = item.value("wall_time", 0.0);
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed results file: ") + e.what());
    }
    return out;
}

std::string render(const std::vector<EvalReport>& reports, ReportFormat fmt) {
    std::ostringstream ss;
    emit_report(ss, reports, fmt);
    return ss.str();
}

int cmd_reproduce(const Common& c, const Model& m, const std::string& prune, std::uint64_t seed,
                  const std::vector<std::string>& only_raw, const std::string& out_dir, std::string reference) {
    std::set<std::string> only;
    for (const auto& o : only_raw) {
        const auto v = o == "table2" ? std::string("basic") : o;
        if (v != "basic" && v != "unigram" && v != "adjadv3")
            throw ConfigError("unknown --only value '" + o + "' (expected basic, unigram or adjadv3)");
        only.insert(v);
    }
    ExperimentConfig base;
    base.prune_scope = parse_prune_scope(prune);
    base.seed = seed;
    base.min_count = m.min_count;
    base.C = m.C;
    base.tol = m.tol;
    base.max_epochs = m.max_epochs;
    const auto grids = reproduction_grids(base, only);

    const auto res = load_resources(c);
    if (!res.lexicon) std::cerr << "note: no --lexicon; pu/pb/t cells are marked skipped\n";
    const auto corpus = load_with_folds(c);
    ExperimentContext ctx(corpus, preprocess_config(c), res.view(), c.jobs);

    std::vector<ExperimentConfig> unique;
    std::map<std::string, std::size_t> by_hash;
    for (const auto& g : grids)
        for (const auto& cfg : g.configs)
            if (by_hash.emplace(cfg.hash(), unique.size()).second) unique.push_back(cfg);

    fs::create_directories(out_dir);
    std::ofstream progress(fs::path(out_dir) / "progress.jsonl");
    std::size_t done = 0;
    const auto reports = run_grid(ctx, unique, c.jobs, [&](std::size_t i, const EvalReport& r) {
        ++done;
        progress << r.to_json().dump() << '\n' << std::flush;
        std::cerr << "[" << done << "/" << unique.size() << "] " << display_name(unique[i].features) << ' '
                  << to_string(unique[i].classifier) << ' ' << to_string(unique[i].representation) << ": ";
        if (r.ok())
            std::cerr << r.mean_accuracy << " (" << r.wall_time << " s)\n";
        else
            std::cerr << r.status << " - " << r.message << '\n';
    });

    const fs::path dir(out_dir);
    write_file(dir / "results.json", render(reports, ReportFormat::Json));
    write_file(dir / "results.csv", render(reports, ReportFormat::Csv));
    for (const auto& g : grids) {
        std::vector<EvalReport> subset;
        for (const auto& cfg : g.configs) subset.push_back(reports[by_hash.at(cfg.hash())]);
        write_file(dir / (g.name + ".csv"), render(subset, ReportFormat::Csv));
        write_file(dir / (g.name + ".md"), render(subset, ReportFormat::Markdown));
    }
    for (const auto& [file, text] : figure_csvs(reports)) write_file(dir / file, text);

    if (reference.empty()) {
        const fs::path def = fs::path(POLARITY_DEFAULT_DATA) / "reference_accuracies.json";
        if (fs::exists(def)) reference = def.string();
    }
    if (!reference.empty()) {
        write_file(dir / "deviation.md",
                   "# Deviation from the published reference accuracies\n\n" +
                       deviation_summary(reports, read_json_file(reference)));
    } else {
        std::cerr << "note: no reference accuracies found; deviation.md not written\n";
    }

    std::size_t ok = 0, skipped = 0, failed = 0;
    for (const auto& r : reports) (r.ok() ? ok : r.status == "skipped" ? skipped : failed)++;
    if (c.format == "json")
        std::cout << json{{"cells", reports.size()}, {"ok", ok}, {"skipped", skipped}, {"error", failed},
                          {"out_dir", out_dir}}
                         .dump(2)
                  << '\n';
    else
        std::cout << reports.size() << " cells: " << ok << " ok, " << skipped << " skipped, " << failed
                  << " failed -> " << out_dir << '\n';
    return failed ? 3 : 0;
}

int cmd_figures(const Common& c, const std::string& results, const std::string& out_dir) {
    const auto reports = reports_from_json(read_json_file(results));
    const auto files = figure_csvs(reports);
    for (const auto& [file, text] : files) write_file(fs::path(out_dir) / file, text);
    if (c.format == "json") {
        json names = json::array();
        for (const auto& [file, text] : files) names.push_back(file);
        std::cout << json{{"files", names}, {"out_dir", out_dir}}.dump(2) << '\n';
    } else {
        for (const auto& [file, text] : files) std::cout << (fs::path(out_dir) / file).string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sentiment-polarity toolkit: corpus statistics, feature extraction, Naive Bayes / linear SVM "
                 "training and cross-validated experiment grids.\n"
                 "Exit codes: 0 success, 2 usage or configuration error, 3 data error.\n"
                 "Environment: POLARITY_DATA_DIR supplies the corpus root when --data is absent."};
    app.require_subcommand(1);

    Common common;
    Model model;
    std::string out_path, vocab_path, model_path, prune = "fold", out_dir = "reproduce_out", reference, results;
    std::uint64_t seed = 1;
    bool shuffle_labels = false;
    std::vector<std::string> inputs, only;

    auto* stats = app.add_subcommand("stats", "Per-label document, sentence, word and distinct-word counts");
    add_corpus_options(stats, common, false);

    auto* extract_cmd = app.add_subcommand("extract", "Write svmlight vectors and the vocabulary for a feature spec");
    add_corpus_options(extract_cmd, common, false);
    add_resource_options(extract_cmd, common);
    add_model_options(extract_cmd, model, false);
    extract_cmd->add_option("--out", out_path, "Vector file (svmlight format)")->required();
    extract_cmd->add_option("--vocab", vocab_path, "Vocabulary file (default: <out>.vocab)");

    auto* evaluate = app.add_subcommand("evaluate", "5-fold cross-validation of one configuration");
    add_corpus_options(evaluate, common, true);
    add_resource_options(evaluate, common);
    add_model_options(evaluate, model, true);
    evaluate->add_option("--prune-scope", prune, "Vocabulary counting scope: fold|corpus")->capture_default_str();
    evaluate->add_option("--seed", seed, "Master seed")->capture_default_str();
    evaluate->add_flag("--shuffle-labels", shuffle_labels, "Control run with permuted training labels");
    evaluate->add_option("--out", out_path, "Report file (.json, .csv or .md)");

    auto* train = app.add_subcommand("train", "Train on the whole corpus and save a model bundle (JSON)");
    add_corpus_options(train, common, false);
    add_resource_options(train, common);
    add_model_options(train, model, true);
    train->add_option("--out", out_path, "Model file")->required();

    auto* predict = app.add_subcommand("predict", "Label documents with a saved model");
    add_corpus_options(predict, common, false);
    add_resource_options(predict, common);
    predict->add_option("--model", model_path, "Model file written by train")->required()->check(CLI::ExistingFile);
    predict->add_option("inputs", inputs, "Text files, directories, or corpus roots")->required();

    auto* reproduce = app.add_subcommand("reproduce", "Run the basic-feature, unigram-combination and "
                                                      "3AdjAdv-combination grids");
    add_corpus_options(reproduce, common, true);
    add_resource_options(reproduce, common);
    reproduce->add_option("--min-count", model.min_count, "Term-removal threshold")->capture_default_str();
    reproduce->add_option("--C", model.C, "SVM soft-margin penalty (default: 1 / mean |x|^2)");
    reproduce->add_option("--tol", model.tol, "SVM tolerance")->capture_default_str();
    reproduce->add_option("--max-epochs", model.max_epochs, "SVM epoch cap")->capture_default_str();
    reproduce->add_option("--prune-scope", prune, "Vocabulary counting scope: fold|corpus")->capture_default_str();
    reproduce->add_option("--seed", seed, "Master seed")->capture_default_str();
    reproduce->add_option("--only", only, "Subset: basic (alias table2), unigram, adjadv3")->delimiter(',');
    reproduce->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    reproduce->add_option("--reference", reference, "Reference accuracies JSON for the deviation summary");

    auto* figures = app.add_subcommand("figures", "Plot-ready CSVs from a reproduce results.json");
    figures->add_option("--results", results, "results.json from reproduce")->required()->check(CLI::ExistingFile);
    figures->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    figures->add_option("--format", common.format, "Output format: text|json")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (common.format != "text" && common.format != "json")
            throw ConfigError("--format must be text or json");
        if (*stats) return cmd_stats(common);
        if (*extract_cmd) return cmd_extract(common, model, out_path, vocab_path);
        if (*evaluate) return cmd_evaluate(common, model, prune, seed, shuffle_labels, out_path);
        if (*train) return cmd_train(common, model, out_path);
        if (*predict) return cmd_predict(common, model_path, inputs);
        if (*reproduce) return cmd_reproduce(common, model, prune, seed, only, out_dir, reference);
        if (*figures) return cmd_figures(common, results, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
