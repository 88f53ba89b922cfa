#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "polarity/lexicon.hpp"
#include "polarity/preprocess.hpp"

namespace polarity {

enum class FeatureFamily {
    Unigram,
    Bigram,
    Trigram,
    PolarizedUnigram,
    PolarizedBigram,
    Adjective,
    AdjAdvBigram,
    AdjAdvTrigram,
    Transition,
};

inline constexpr FeatureFamily kAllFamilies[] = {
    FeatureFamily::Unigram,          FeatureFamily::Bigram,         FeatureFamily::Trigram,
    FeatureFamily::PolarizedUnigram, FeatureFamily::PolarizedBigram, FeatureFamily::Adjective,
    FeatureFamily::AdjAdvBigram,     FeatureFamily::AdjAdvTrigram,  FeatureFamily::Transition,
};

/// "u:", "b:", "t:", "pu:", "pb:", "adj:", "aab:", "aat:", "tr:"
std::string_view namespace_prefix(FeatureFamily family);

/// Canonical token used in spec strings: unigram, bigram, trigram, pu, pb,
/// adj, adjadv, 3adjadv, t.
std::string_view family_token(FeatureFamily family);

bool needs_lexicon(FeatureFamily family);

/// Multiset of namespaced feature strings, iterated in lexicographic order.
class FeatureBag {
public:
    using Map = std::map<std::string, std::uint32_t, std::less<>>;

    void add(std::string feature, std::uint32_t count = 1);
    void merge(const FeatureBag& other);

    std::uint32_t count(std::string_view feature) const;
    bool contains(std::string_view feature) const { return count(feature) > 0; }
    std::size_t size() const { return counts_.size(); }
    bool empty() const { return counts_.empty(); }
    std::uint64_t total() const;

    Map::const_iterator begin() const { return counts_.begin(); }
    Map::const_iterator end() const { return counts_.end(); }

    /// "feature<TAB>count" lines, sorted.
    std::string to_text() const;

    bool operator==(const FeatureBag&) const = default;

private:
    Map counts_;
};

struct FeatureSpec {
    std::vector<FeatureFamily> families;  // sorted, unique
    bool negation = false;  // documents are NOT_-tagged before extraction

    /// Parses "unigram+pb+t", "3adjadv+pb", ... Throws ConfigError on unknown
    /// or duplicate tokens, or an empty list.
    static FeatureSpec parse(std::string_view text, bool negation = false);

    /// Canonical "+"-joined family tokens.
    std::string to_string() const;
    bool requires_lexicon() const;
    bool requires_transitions() const;
    bool contains(FeatureFamily family) const;

    bool operator==(const FeatureSpec&) const = default;
};

/// Comma-separated list of accepted spec tokens, for error messages.
std::string valid_family_tokens();

FeatureBag extract_ngrams(const Document& doc, int n);
FeatureBag extract_polarized_unigrams(const Document& doc, const SubjectivityLexicon& lex);
FeatureBag extract_polarized_bigrams(const Document& doc, const SubjectivityLexicon& lex);
FeatureBag extract_adjectives(const Document& doc);
FeatureBag extract_adjadv_bigrams(const Document& doc);
FeatureBag extract_adjadv_trigrams(const Document& doc);
FeatureBag extract_transitions(const Document& doc, const TransitionList& transitions,
                               const SubjectivityLexicon* lex);

struct FeatureResources {
    const SubjectivityLexicon* lexicon = nullptr;
    const TransitionList* transitions = nullptr;
};

FeatureBag extract_family(const Document& doc, FeatureFamily family, const FeatureResources& res);

/// Union of every family in the feature spec. Throws ConfigError when a family needs
/// a resource that is missing.
FeatureBag extract(const Document& doc, const FeatureSpec& spec, const FeatureResources& res);

}  // namespace polarity
