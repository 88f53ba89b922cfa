#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polarity {

enum class Polarity { Positive, Negative };

/// "POS" or "NEG", the label used inside polarized feature strings.
std::string_view polarity_tag(Polarity p);

enum class PosClass { Noun, Verb, Adjective, Adverb, Any };

/// Coarse class of a Penn tag: N* noun, V* verb, JJ/JJR/JJS adjective,
/// RB/RBR/RBS adverb. Other tags have no content class.
std::optional<PosClass> coarse_class(std::string_view tag);

inline bool is_adjective_tag(std::string_view tag) { return coarse_class(tag) == PosClass::Adjective; }
inline bool is_adverb_tag(std::string_view tag) { return coarse_class(tag) == PosClass::Adverb; }

struct LexiconEntry {
    Polarity polarity;
    PosClass pos = PosClass::Any;

    bool operator==(const LexiconEntry&) const = default;
};

enum class LexiconFormat { Tff, Tsv };

LexiconFormat parse_lexicon_format(std::string_view text);

struct LexiconReport {
    std::size_t positive_entries = 0;  // per (word, pos constraint) entry
    std::size_t negative_entries = 0;
    std::size_t positive_words = 0;  // distinct word forms with a positive entry
    std::size_t negative_words = 0;
    std::size_t dropped_entries = 0;  // neutral / both
};

class SubjectivityLexicon {
public:
    void add(std::string word, LexiconEntry entry);

    /// Entries for `word` in file order, or an empty span.
    std::span<const LexiconEntry> entries(std::string_view word) const;

    bool empty() const { return entries_.empty(); }
    std::size_t word_count() const { return entries_.size(); }
    LexiconReport report() const;

private:
    std::map<std::string, std::vector<LexiconEntry>, std::less<>> entries_;
    std::size_t dropped_ = 0;

    friend SubjectivityLexicon parse_lexicon(std::istream&, LexiconFormat);
};

/// TFF: MPQA clues lines "type=... len=1 word1=... pos1=... priorpolarity=...".
/// TSV: "word<TAB>polarity[<TAB>pos]". Neutral and "both" entries are dropped.
SubjectivityLexicon parse_lexicon(std::istream& in, LexiconFormat format);
SubjectivityLexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format);

/// Prefers the entry constrained to the tag's coarse class, then an
/// unconstrained entry, then the first entry for the word.
std::optional<Polarity> polarity_of(std::string_view word, std::string_view tag,
                                    const SubjectivityLexicon& lexicon);

/// Contrastive connectives, stored longest-first (by token count) for greedy matching.
class TransitionList {
public:
    struct Match {
        std::size_t phrase;  // index into phrases()
        std::size_t begin;   // token span [begin, end)
        std::size_t end;
    };

    TransitionList() = default;
    explicit TransitionList(std::vector<std::string> phrases);

    const std::vector<std::string>& phrases() const { return phrases_; }
    std::size_t size() const { return phrases_.size(); }

    /// "on the other hand" -> "on_the_other_hand"
    std::string feature_name(std::size_t phrase) const;

    /// Non-overlapping matches, scanning left to right and trying longer phrases first.
    std::vector<Match> find(std::span<const std::string_view> words) const;

private:
    std::vector<std::string> phrases_;
    std::vector<std::vector<std::string>> tokens_;
};

TransitionList parse_transitions(std::istream& in);
TransitionList load_transitions(const std::filesystem::path& path);

/// The 27-phrase list shipped with the toolkit (also in data/transitions.txt).
TransitionList default_transitions();

}  // namespace polarity
