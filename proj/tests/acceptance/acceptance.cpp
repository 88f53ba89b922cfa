// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion, with
// indented detail lines. Needs POLARITY_DATA_DIR (exit 77 = skipped otherwise);
// POLARITY_LEXICON, POLARITY_LEXICON_FORMAT, POLARITY_TAGGER_LEXICON and
// POLARITY_TAGGER_RULES are optional.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "polarity/corpus.hpp"
#include "polarity/error.hpp"
#include "polarity/eval.hpp"
#include "polarity/features.hpp"
#include "polarity/lexicon.hpp"
#include "polarity/linear_svm.hpp"
#include "polarity/naive_bayes.hpp"
#include "polarity/tagger.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polarity;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string env(const char* name) {
    const char* v = std::getenv(name);
    return v ? v : "";
}

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "[ok] " : "[x]  ") + what);
    }
    void note(const std::string& what) { details.push_back("     " + what); }
};

std::vector<Criterion> results;

void report(const Criterion& c) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
    for (const auto& d : c.details) std::cout << "       " << d << '\n';
    std::cout << std::flush;
    results.push_back(c);
}

struct Run {
    int code = -1;
    std::string out;
    double seconds = 0;
};

Run run_cli(const std::string& args) {
    const auto t0 = Clock::now();
    const std::string cmd = quote(POLARITY_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.seconds = seconds_since(t0);
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Setup {
    std::string data, lexicon, lexicon_format, tagger_lexicon, tagger_rules;
    std::string fold_flags;  // CLI flags reproducing the fold assignment used here

    std::string common_flags() const {
        std::string s = "--data " + quote(data) + " " + fold_flags;
        if (!tagger_lexicon.empty()) s += " --tagger-lexicon " + quote(tagger_lexicon);
        if (!tagger_rules.empty()) s += " --tagger-rules " + quote(tagger_rules);
        if (!lexicon.empty()) s += " --lexicon " + quote(lexicon) + " --lexicon-format " + lexicon_format;
        return s;
    }
};

// Published corpus statistics: documents, sentences, words, distinct words per label.
struct TableRow {
    const char* label;
    std::uint64_t sentences, words, distinct;
};
constexpr TableRow kPositiveRow{"pos", 31944, 614970, 35140};
constexpr TableRow kNegativeRow{"neg", 33033, 687664, 37298};

double rel(double measured, double target) { return std::abs(measured - target) / target; }

void ac1(const Setup& s) {
    Criterion c{"AC1 corpus fidelity: 1000/1000 documents, counts within 2%, stats < 10 s"};
    const auto r = run_cli("stats --data " + quote(s.data) + " --format json");
    if (r.code != 0) {
        c.check(false, "stats exited with code " + std::to_string(r.code));
        report(c);
        return;
    }
    const auto j = json::parse(r.out);
    for (const auto* row : {&kPositiveRow, &kNegativeRow}) {
        const auto& m = j.at(row->label);
        c.check(m.at("documents") == 1000, std::string(row->label) + " documents " + m.at("documents").dump() +
                                               " (expected 1000)");
        for (auto [field, target] : {std::pair{"sentences", row->sentences}, std::pair{"words", row->words},
                                     std::pair{"distinct", row->distinct}}) {
            const double v = m.at(field).get<double>();
            c.check(rel(v, static_cast<double>(target)) <= 0.02,
                    std::string(row->label) + " " + field + " " + fmt(v, 0) + " vs " + std::to_string(target) +
                        " (rel. diff " + fmt(100 * rel(v, static_cast<double>(target)), 2) + "%)");
        }
    }
    // Informational: the published rows compared with the labels exchanged.
    for (auto [label, row] : {std::pair{"pos", &kNegativeRow}, std::pair{"neg", &kPositiveRow}}) {
        const auto& m = j.at(label);
        const double docs = m.at("documents").get<double>();
        const double scale = docs > 0 ? 1000.0 / docs : 0;
        c.note(std::string("info: ") + label + " scaled to 1000 docs vs the other published row: words " +
               fmt(m.at("words").get<double>() * scale, 0) + " vs " + std::to_string(row->words) + ", sentences " +
               fmt(m.at("sentences").get<double>() * scale, 0) + " vs " + std::to_string(row->sentences));
    }
    c.check(r.seconds < 10, "stats runtime " + fmt(r.seconds, 2) + " s (< 10 s)");
    report(c);
}

ExperimentConfig cell(const std::string& features, bool negation, Classifier clf, Representation rep) {
    ExperimentConfig cfg;
    cfg.features = FeatureSpec::parse(features, negation);
    cfg.classifier = clf;
    cfg.representation = rep;
    cfg.prune_scope = PruneScope::Corpus;
    cfg.seed = 1;
    return cfg;
}

constexpr auto NB = Classifier::NaiveBayes;
constexpr auto SVM = Classifier::Svm;
constexpr auto PRES = Representation::Presence;
constexpr auto FREQ = Representation::Frequency;

class Results {
public:
    void add(const EvalReport& r) { by_hash_[r.config.hash()] = r; }
    const EvalReport& get(const ExperimentConfig& cfg) const { return by_hash_.at(cfg.hash()); }
    double acc(const std::string& f, Classifier clf, Representation rep, bool neg = false) const {
        return get(cell(f, neg, clf, rep)).mean_accuracy;
    }

private:
    std::map<std::string, EvalReport> by_hash_;
};

std::string cell_name(const std::string& f, Classifier clf, Representation rep) {
    return f + " " + std::string(to_string(clf)) + " " + std::string(to_string(rep));
}

void ac5() {
    Criterion c{"AC5 worked-example goldens (exact)"};
    std::istringstream lex_text("recommend\tpositive\nfamous\tpositive\n");
    const auto lex = parse_lexicon(lex_text, LexiconFormat::Tsv);
    const auto trans = default_transitions();
    PreprocessConfig pp;
    pp.tagger = make_builtin_tagger();

    auto features_of = [&](const std::string& text, FeatureFamily f) {
        const auto doc = preprocess_document(RawDocument{"golden", Label::Positive, text}, pp);
        std::string tags;
        for (const auto& t : doc.sentences.at(0).tokens) tags += t.surface + "_" + t.pos + " ";
        c.note("tagged: " + tags);
        std::set<std::string> out;
        for (const auto& [name, count] : extract_family(doc, f, FeatureResources{&lex, &trans})) out.insert(name);
        return out;
    };
    auto show = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& x : s) out += x + " ";
        return out;
    };

    const std::set<std::string> pb_expected{"pb:highly_POS/VB", "pb:RB_POS/VB", "pb:POS/VB_this", "pb:POS/VB_DT"};
    const auto pb = features_of("I highly recommend this movie.", FeatureFamily::PolarizedBigram);
    c.check(pb == pb_expected, "polarized bigrams: " + show(pb));

    const std::set<std::string> tr_expected{"tr:although_director", "tr:although_is", "tr:although_famous",
                                            "tr:although_POS/JJ"};
    const auto tr = features_of("Although the director is famous", FeatureFamily::Transition);
    c.check(tr == tr_expected, "transition features: " + show(tr));
    report(c);
}

void ac6_oracles(Criterion& c) {
    // NB toy corpus: ids bad=0, dull=1, fun=2, good=3.
    const std::vector<SparseVector> toy{{{{3, 1.0}}, Label::Positive},
                                        {{{2, 1.0}, {3, 1.0}}, Label::Positive},
                                        {{{0, 1.0}}, Label::Negative},
                                        {{{0, 1.0}, {1, 1.0}}, Label::Negative}};
    const auto nb = train_nb(toy, 4);
    const double p_good_pos = std::exp(nb.feature_log_likelihood[1][3]);
    const double p_good_neg = std::exp(nb.feature_log_likelihood[0][3]);
    const auto pred = predict_nb(nb, SparseVector{{{3, 1.0}}, std::nullopt});
    const double posterior = 1 / (1 + std::exp(-pred.score));
    // Hand values: P(good|+) = 3/7, P(good|-) = 1/7, equal priors -> P(+|good) = 3/4.
    c.check(std::abs(p_good_pos - 3.0 / 7) < 1e-9 && std::abs(p_good_neg - 1.0 / 7) < 1e-9 &&
                std::abs(posterior - 0.75) < 1e-9 && pred.label == Label::Positive,
            "NB toy corpus: P(good|+) = " + fmt(p_good_pos, 12) + ", P(+|good) = " + fmt(posterior, 12));

    const std::vector<SparseVector> xs{{{{0, 2.0}}, Label::Positive}, {{{0, -2.0}}, Label::Negative}};
    const double tol = 1e-3;
    const auto m = train_svm(xs, 2, SvmOptions{.tol = tol});
    const bool sep = std::abs(m.weights[0] - 0.5) <= tol && std::abs(m.weights[1]) <= tol && std::abs(m.bias) <= tol;
    c.check(sep, "SVM 2D instance: w = (" + fmt(m.weights[0], 6) + ", " + fmt(m.weights[1], 6) + "), b = " +
                     fmt(m.bias, 6) + " (analytic (0.5, 0), 0)");
    const auto margins = training_margins(m, xs);
    bool kkt = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double a = m.meta.alpha[i], g = margins[i];
        if (a <= 0)
            kkt = kkt && g >= 1 - tol;
        else if (a >= m.C)
            kkt = kkt && g <= 1 + tol;
        else
            kkt = kkt && std::abs(g - 1) <= tol;
    }
    c.check(kkt, "SVM KKT residual within " + fmt(tol, 4) + " on every training point (margins " +
                     fmt(margins[0], 6) + ", " + fmt(margins[1], 6) + ")");
}

}  // namespace

int main() {
    Setup s;
    s.data = env("POLARITY_DATA_DIR");
    s.lexicon = env("POLARITY_LEXICON");
    s.lexicon_format = env("POLARITY_LEXICON_FORMAT").empty() ? "tff" : env("POLARITY_LEXICON_FORMAT");
    s.tagger_lexicon = env("POLARITY_TAGGER_LEXICON");
    s.tagger_rules = env("POLARITY_TAGGER_RULES");
    if (!s.tagger_lexicon.empty() && !fs::exists(s.tagger_lexicon)) s.tagger_lexicon.clear();
    if (!s.tagger_rules.empty() && !fs::exists(s.tagger_rules)) s.tagger_rules.clear();

    if (s.data.empty() || !fs::is_directory(s.data)) {
        std::cout << "SKIP acceptance: set POLARITY_DATA_DIR (or -DPOLARITY_DATA_DIR) to a polarity corpus root\n";
        return 77;
    }
    std::cout << "data: " << s.data << "\nlexicon: " << (s.lexicon.empty() ? "(none)" : s.lexicon + " [" + s.lexicon_format + "]")
              << "\ntagger: builtin" << (s.tagger_lexicon.empty() ? "" : " + " + s.tagger_lexicon)
              << (s.tagger_rules.empty() ? "" : " + " + s.tagger_rules) << "\n\n";

    try {
        ac1(s);

        const auto t0 = Clock::now();
        auto corpus = load_corpus(s.data);
        try {
            corpus = assign_folds(std::move(corpus), FoldMode::ByFilename);
            s.fold_flags = "--folds filename";
        } catch (const ConfigError&) {
            corpus = assign_folds(load_corpus(s.data), FoldMode::StratifiedSeeded, 1);
            s.fold_flags = "--folds stratified --fold-seed 1";
            std::cout << "note: no cvNNN file ids; folds are stratified with seed 1\n";
        }
        std::optional<SubjectivityLexicon> lexicon;
        if (!s.lexicon.empty()) lexicon = load_lexicon(s.lexicon, parse_lexicon_format(s.lexicon_format));
        const auto transitions = default_transitions();
        PreprocessConfig pp;
        pp.tagger = make_builtin_tagger(s.tagger_lexicon, s.tagger_rules);
        const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
        ExperimentContext ctx(corpus, pp, FeatureResources{lexicon ? &*lexicon : nullptr, &transitions}, jobs);

        Results res;
        auto run_cells = [&](const std::vector<ExperimentConfig>& cells) {
            for (const auto& r : run_grid(ctx, cells, jobs)) {
                if (!r.ok()) std::cout << "note: " << display_name(r.config.features) << ": " << r.status << " - " << r.message << '\n';
                res.add(r);
            }
        };

        // AC2: headline unigram cells, timed from corpus loading.
        run_cells({cell("unigram", false, SVM, PRES), cell("unigram", false, NB, PRES), cell("unigram", false, SVM, FREQ),
                   cell("unigram", false, NB, FREQ)});
        const double ac2_seconds = seconds_since(t0);
        {
            Criterion c{"AC2 unigram accuracies within budget of the published values, runtime < 15 min"};
            const struct {
                Classifier clf;
                Representation rep;
                double target, budget;
            } targets[] = {{SVM, PRES, 0.859, 0.03}, {NB, PRES, 0.807, 0.03}, {SVM, FREQ, 0.747, 0.04}, {NB, FREQ, 0.677, 0.04}};
            for (const auto& t : targets) {
                const double a = res.acc("unigram", t.clf, t.rep);
                c.check(std::abs(a - t.target) <= t.budget, cell_name("unigram", t.clf, t.rep) + " " + fmt(a) + " vs " +
                                                                fmt(t.target) + " +/- " + fmt(t.budget, 2));
            }
            c.check(ac2_seconds < 900, "runtime " + fmt(ac2_seconds, 1) + " s (< 900 s)");
            report(c);
        }

        std::vector<ExperimentConfig> more;
        for (const auto* f : {"bigram", "trigram"})
            for (auto clf : {NB, SVM}) more.push_back(cell(f, false, clf, PRES));
        for (const auto* f : {"adj", "3adjadv"})
            for (auto clf : {NB, SVM})
                for (auto rep : {PRES, FREQ}) more.push_back(cell(f, false, clf, rep));
        more.push_back(cell("unigram+pb", false, SVM, PRES));
        more.push_back(cell("3adjadv+pb", false, SVM, PRES));
        run_cells(more);

        {
            Criterion c{"AC3 ordering: (a) SVM >= NB presence on n-grams, (b) presence >= frequency on unigrams, "
                        "(c) Adjective > 3AdjAdv"};
            for (const auto* f : {"unigram", "bigram", "trigram"}) {
                const double svm = res.acc(f, SVM, PRES), nb = res.acc(f, NB, PRES);
                c.check(svm >= nb, std::string("(a) ") + f + " presence: SVM " + fmt(svm) + " >= NB " + fmt(nb));
            }
            for (auto clf : {NB, SVM}) {
                const double p = res.acc("unigram", clf, PRES), q = res.acc("unigram", clf, FREQ);
                c.check(p >= q, std::string("(b) unigram ") + std::string(to_string(clf)) + ": presence " + fmt(p) +
                                    " >= frequency " + fmt(q));
            }
            for (auto clf : {NB, SVM})
                for (auto rep : {PRES, FREQ}) {
                    const double a = res.acc("adj", clf, rep), t = res.acc("3adjadv", clf, rep);
                    c.check(a > t, "(c) " + std::string(to_string(clf)) + " " + std::string(to_string(rep)) +
                                       ": Adjective " + fmt(a) + " > 3AdjAdv " + fmt(t));
                }
            report(c);
        }

        {
            Criterion c{"AC4 combination boost with SVM presence"};
            const auto& upb = res.get(cell("unigram+pb", false, SVM, PRES));
            const auto& apb = res.get(cell("3adjadv+pb", false, SVM, PRES));
            const double u = res.acc("unigram", SVM, PRES), a = res.acc("3adjadv", SVM, PRES);
            c.check(upb.ok() && upb.mean_accuracy >= u - 0.005,
                    "U+PB " + (upb.ok() ? fmt(upb.mean_accuracy) : upb.status) + " >= U " + fmt(u) + " - 0.005");
            c.check(apb.ok() && apb.mean_accuracy >= a + 0.01,
                    "3AdjAdv+PB " + (apb.ok() ? fmt(apb.mean_accuracy) : apb.status) + " >= 3AdjAdv " + fmt(a) + " + 0.01");
            report(c);
        }

        ac5();

        {
            Criterion c{"AC6 classifier oracles and label-shuffled control"};
            ac6_oracles(c);
            auto control = cell("unigram", false, NB, PRES);
            control.shuffle_labels = true;
            const auto r = run_experiment(ctx, control);
            c.check(std::abs(r.mean_accuracy - 0.5) <= 0.04,
                    "label-shuffled unigram NB presence " + fmt(r.mean_accuracy) + " within 0.5 +/- 0.04");
            report(c);
        }

        {
            Criterion c{"AC7 determinism: two reproduce --seed 1 runs give byte-identical CSVs"};
            const fs::path base = fs::temp_directory_path() / ("polarity_accept_" + std::to_string(::getpid()));
            fs::remove_all(base);
            std::array<Run, 2> runs;
            for (int i = 0; i < 2; ++i)
                runs[i] = run_cli("reproduce " + s.common_flags() + " --seed 1 --only table2 --prune-scope corpus --jobs " +
                                  std::to_string(jobs) + " --out-dir " + quote((base / std::to_string(i)).string()));
            c.check(runs[0].code == 0 && runs[1].code == 0, "reproduce exit codes " + std::to_string(runs[0].code) +
                                                                ", " + std::to_string(runs[1].code));
            std::size_t compared = 0;
            for (const auto& e : fs::directory_iterator(base / "0")) {
                if (e.path().extension() != ".csv") continue;
                const auto other = base / "1" / e.path().filename();
                const bool same = fs::exists(other) && read_file(e.path()) == read_file(other);
                c.check(same, e.path().filename().string() + " identical");
                ++compared;
            }
            c.check(compared > 0, std::to_string(compared) + " CSV files compared");
            fs::remove_all(base);
            report(c);
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL acceptance aborted: " << e.what() << '\n';
        return 1;
    }

    const auto passed = std::count_if(results.begin(), results.end(), [](const Criterion& c) { return c.pass; });
    std::cout << "\n" << passed << "/" << results.size() << " criteria passed\n";
    return passed == static_cast<long>(results.size()) ? 0 : 1;
}
