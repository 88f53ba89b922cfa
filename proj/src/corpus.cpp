#include "polarity/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "polarity/error.hpp"
#include "polarity/preprocess.hpp"
#include "polarity/random.hpp"

namespace polarity {

namespace fs = std::filesystem;

namespace {

std::vector<RawDocument> read_label_dir(const fs::path& dir, Label label) {
    std::vector<RawDocument> docs;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return docs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (name.empty() || name[0] == '.') continue;
        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) throw DataError("cannot read " + entry.path().string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad()) throw DataError("cannot read " + entry.path().string());
        docs.push_back(RawDocument{entry.path().stem().string(), label, ss.str()});
    }
    return docs;
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::Positive ? "pos" : "neg"; }

std::string_view to_string(FoldMode mode) {
    return mode == FoldMode::ByFilename ? "filename" : "stratified";
}

FoldMode parse_fold_mode(std::string_view text) {
    if (text == "filename" || text == "byfilename") return FoldMode::ByFilename;
    if (text == "stratified" || text == "stratifiedseeded") return FoldMode::StratifiedSeeded;
    throw ConfigError("unknown fold mode '" + std::string(text) + "' (expected filename or stratified)");
}

Corpus::Corpus(std::vector<RawDocument> documents) : documents_(std::move(documents)) {
    std::sort(documents_.begin(), documents_.end(),
              [](const RawDocument& a, const RawDocument& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < documents_.size(); ++i)
        if (documents_[i].id == documents_[i - 1].id)
            throw DataError("duplicate document id '" + documents_[i].id + "'");
}

std::size_t Corpus::count(Label label) const {
    return static_cast<std::size_t>(std::count_if(documents_.begin(), documents_.end(),
                                                  [&](const RawDocument& d) { return d.label == label; }));
}

std::optional<int> Corpus::fold_of(std::string_view id) const {
    if (!has_folds()) return std::nullopt;
    auto it = std::lower_bound(documents_.begin(), documents_.end(), id,
                               [](const RawDocument& d, std::string_view v) { return d.id < v; });
    if (it == documents_.end() || it->id != id) return std::nullopt;
    return folds_[static_cast<std::size_t>(it - documents_.begin())];
}

void Corpus::set_folds(std::vector<int> folds) {
    if (folds.size() != documents_.size())
        throw Error("fold vector size does not match the corpus");
    for (int f : folds)
        if (f < 0 || f >= kNumFolds) throw Error("fold index out of range");
    folds_ = std::move(folds);
}

Corpus load_corpus(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw ConfigError("corpus root " + root.string() + " is not a directory");
    auto pos = read_label_dir(root / "pos", Label::Positive);
    auto neg = read_label_dir(root / "neg", Label::Negative);
    if (pos.empty()) throw ConfigError("pos/ missing or empty under " + root.string());
    if (neg.empty()) throw ConfigError("neg/ missing or empty under " + root.string());
    std::move(neg.begin(), neg.end(), std::back_inserter(pos));
    return Corpus(std::move(pos));
}

Corpus assign_folds(Corpus corpus, FoldMode mode, std::uint64_t seed) {
    const auto& docs = corpus.documents();
    std::vector<int> folds(docs.size(), 0);
    if (mode == FoldMode::ByFilename) {
        static const std::regex cv("^cv(\\d{3})");
        for (std::size_t i = 0; i < docs.size(); ++i) {
            std::smatch m;
            if (!std::regex_search(docs[i].id, m, cv))
                throw ConfigError("document '" + docs[i].id +
                                  "' does not follow the cvNNN naming; use --folds stratified");
            folds[i] = std::stoi(m[1].str()) / 200;
        }
    } else {
        // The dealer position carries over between labels so total fold sizes stay balanced too.
        std::size_t dealer = 0;
        for (Label label : {Label::Positive, Label::Negative}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < docs.size(); ++i)
                if (docs[i].label == label) idx.push_back(i);
            seeded_shuffle(idx, derive_seed(seed, label == Label::Positive ? 0 : 1));
            for (auto i : idx) folds[i] = static_cast<int>(dealer++ % kNumFolds);
        }
    }
    corpus.set_folds(std::move(folds));
    return corpus;
}

nlohmann::json CorpusStats::to_json() const {
    auto one = [](const LabelStats& s) {
        return nlohmann::json{{"documents", s.documents},
                              {"sentences", s.sentences},
                              {"words", s.words},
                              {"distinct", s.distinct}};
    };
    return nlohmann::json{{"pos", one(pos)}, {"neg", one(neg)}};
}

CorpusStats compute_stats(const Corpus& corpus, const PreprocessConfig& cfg) {
    CorpusStats stats;
    std::unordered_set<std::string> pos_vocab, neg_vocab;
    for (const auto& doc : corpus.documents()) {
        const bool positive = doc.label == Label::Positive;
        auto& s = positive ? stats.pos : stats.neg;
        auto& vocab = positive ? pos_vocab : neg_vocab;
        ++s.documents;
        const auto expanded = expand_contractions(doc.text);
        std::istringstream lines(expanded);
        std::string line;
        while (std::getline(lines, line)) {
            auto words = tokenize_line(line, cfg.punctuation_keep);
            if (words.empty()) continue;
            if (cfg.apply_negation) {
                auto sentence = tag_negation(make_sentence(words), cfg.negation_triggers, cfg.punctuation_keep);
                for (std::size_t i = 0; i < words.size(); ++i) words[i] = sentence.tokens[i].surface;
            }
            ++s.sentences;
            s.words += words.size();
            for (auto& w : words) vocab.insert(std::move(w));
        }
    }
    stats.pos.distinct = pos_vocab.size();
    stats.neg.distinct = neg_vocab.size();
    return stats;
}

}  // namespace polarity
