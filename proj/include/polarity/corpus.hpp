#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polarity {

struct PreprocessConfig;

enum class Label : std::int8_t { Negative = -1, Positive = 1 };

inline int sign(Label label) { return static_cast<int>(label); }
std::string_view to_string(Label label);

struct RawDocument {
    std::string id;  // file stem, e.g. "cv000_29416"
    Label label = Label::Positive;
    std::string text;

    bool operator==(const RawDocument&) const = default;
};

inline constexpr int kNumFolds = 5;

enum class FoldMode { ByFilename, StratifiedSeeded };

std::string_view to_string(FoldMode mode);
FoldMode parse_fold_mode(std::string_view text);

/// An ordered, labeled document collection with an optional 5-fold partition.
///
/// Documents are kept sorted by id. Fold indices are parallel to documents().
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<RawDocument> documents);

    const std::vector<RawDocument>& documents() const { return documents_; }
    std::size_t size() const { return documents_.size(); }
    bool empty() const { return documents_.empty(); }
    std::size_t count(Label label) const;

    bool has_folds() const { return !folds_.empty(); }
    int fold_of(std::size_t index) const { return folds_.at(index); }
    std::optional<int> fold_of(std::string_view id) const;
    const std::vector<int>& folds() const { return folds_; }
    void set_folds(std::vector<int> folds);

    bool operator==(const Corpus&) const = default;

private:
    std::vector<RawDocument> documents_;
    std::vector<int> folds_;
};

/// Reads <root>/pos/* and <root>/neg/*; every regular non-hidden file is one document.
Corpus load_corpus(const std::filesystem::path& root);

/// ByFilename: fold = NNN / 200 from a leading "cvNNN" id prefix.
/// StratifiedSeeded: each label is shuffled with `seed` and dealt round-robin.
Corpus assign_folds(Corpus corpus, FoldMode mode, std::uint64_t seed = 0);

struct LabelStats {
    std::uint64_t documents = 0;
    std::uint64_t sentences = 0;
    std::uint64_t words = 0;
    std::uint64_t distinct = 0;

    bool operator==(const LabelStats&) const = default;
};

struct CorpusStats {
    LabelStats pos;
    LabelStats neg;

    nlohmann::json to_json() const;
    bool operator==(const CorpusStats&) const = default;
};

/// Counts sentences (non-empty lines), whitespace tokens and distinct tokens
/// after contraction expansion and punctuation removal. No POS tagging.
CorpusStats compute_stats(const Corpus& corpus, const PreprocessConfig& cfg);

}  // namespace polarity
