#include "polarity/features.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "polarity/error.hpp"

namespace polarity {

namespace {

struct FamilyInfo {
    FeatureFamily family;
    std::string_view prefix;
    std::string_view token;
    std::initializer_list<std::string_view> aliases;
};

const FamilyInfo kFamilies[] = {
    {FeatureFamily::Unigram, "u:", "unigram", {"unigram", "uni", "u"}},
    {FeatureFamily::Bigram, "b:", "bigram", {"bigram", "bi", "b"}},
    {FeatureFamily::Trigram, "t:", "trigram", {"trigram", "tri"}},
    {FeatureFamily::PolarizedUnigram, "pu:", "pu", {"pu", "polarized-unigram"}},
    {FeatureFamily::PolarizedBigram, "pb:", "pb", {"pb", "polarized-bigram"}},
    {FeatureFamily::Adjective, "adj:", "adj", {"adj", "adjective"}},
    {FeatureFamily::AdjAdvBigram, "aab:", "adjadv", {"adjadv", "aab", "adjadv-bigram"}},
    {FeatureFamily::AdjAdvTrigram, "aat:", "3adjadv", {"3adjadv", "aat", "adjadv-trigram"}},
    {FeatureFamily::Transition, "tr:", "t", {"t", "tr", "transition"}},
};

const FamilyInfo& info(FeatureFamily f) {
    for (const auto& i : kFamilies)
        if (i.family == f) return i;
    throw Error("unknown feature family");
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// "<POL>/<TAG>" for a token, or empty when the token is not in the lexicon.
std::string polarized_core(const Token& t, const SubjectivityLexicon& lex) {
    auto p = polarity_of(t.bare(), t.pos, lex);
    if (!p) return {};
    std::string core(polarity_tag(*p));
    core += '/';
    core += t.pos;
    return core;
}

bool adj_or_adv(const Token& t) {
    auto c = coarse_class(t.pos);
    return c == PosClass::Adjective || c == PosClass::Adverb;
}

FeatureBag filtered_ngrams(const Document& doc, std::size_t n, std::string_view prefix) {
    FeatureBag bag;
    for (const auto& s : doc.sentences) {
        const auto& toks = s.tokens;
        if (toks.size() < n) continue;
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
            bool keep = false;
            for (std::size_t k = 0; k < n && !keep; ++k) keep = adj_or_adv(toks[i + k]);
            if (!keep) continue;
            std::string f(prefix);
            for (std::size_t k = 0; k < n; ++k) {
                if (k) f += '_';
                f += toks[i + k].surface;
            }
            bag.add(std::move(f));
        }
    }
    return bag;
}

}  // namespace

std::string_view namespace_prefix(FeatureFamily family) { return info(family).prefix; }
std::string_view family_token(FeatureFamily family) { return info(family).token; }

bool needs_lexicon(FeatureFamily family) {
    return family == FeatureFamily::PolarizedUnigram || family == FeatureFamily::PolarizedBigram ||
           family == FeatureFamily::Transition;
}

void FeatureBag::add(std::string feature, std::uint32_t count) {
    if (count == 0) return;
    auto it = counts_.find(feature);
    if (it == counts_.end())
        counts_.emplace(std::move(feature), count);
    else
        it->second += count;
}

void FeatureBag::merge(const FeatureBag& other) {
    for (const auto& [f, c] : other.counts_) add(f, c);
}

std::uint32_t FeatureBag::count(std::string_view feature) const {
    auto it = counts_.find(feature);
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t FeatureBag::total() const {
    std::uint64_t t = 0;
    for (const auto& [f, c] : counts_) t += c;
    return t;
}

std::string FeatureBag::to_text() const {
    std::string out;
    for (const auto& [f, c] : counts_) {
        out += f;
        out += '\t';
        out += std::to_string(c);
        out += '\n';
    }
    return out;
}

std::string valid_family_tokens() {
    std::string out;
    for (const auto& i : kFamilies) {
        for (auto alias : i.aliases) {
            if (!out.empty()) out += ", ";
            out += alias;
        }
    }
    return out;
}

FeatureSpec FeatureSpec::parse(std::string_view text, bool negation) {
    FeatureSpec spec;
    spec.negation = negation;
    std::set<FeatureFamily> seen;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('+', start);
        if (end == std::string_view::npos) end = text.size();
        const auto token = lowercase(text.substr(start, end - start));
        start = end + 1;
        if (token.empty()) {
            if (text.empty()) break;
            throw ConfigError("empty feature family in '" + std::string(text) + "'");
        }
        const FamilyInfo* found = nullptr;
        for (const auto& i : kFamilies)
            for (auto alias : i.aliases)
                if (alias == token) found = &i;
        if (!found)
            throw ConfigError("unknown feature family '" + token + "'; valid tokens: " +
                              valid_family_tokens());
        if (!seen.insert(found->family).second)
            throw ConfigError("duplicate feature family '" + token + "' in '" + std::string(text) + "'");
    }
    if (seen.empty()) throw ConfigError("feature spec names no families");
    spec.families.assign(seen.begin(), seen.end());
    return spec;
}

std::string FeatureSpec::to_string() const {
    std::string out;
    for (auto f : families) {
        if (!out.empty()) out += '+';
        out += family_token(f);
    }
    return out;
}

bool FeatureSpec::requires_lexicon() const {
    return std::any_of(families.begin(), families.end(), needs_lexicon);
}

bool FeatureSpec::requires_transitions() const { return contains(FeatureFamily::Transition); }

bool FeatureSpec::contains(FeatureFamily family) const {
    return std::find(families.begin(), families.end(), family) != families.end();
}

FeatureBag extract_ngrams(const Document& doc, int n) {
    if (n < 1 || n > 3) throw ConfigError("n-gram order must be 1, 2 or 3");
    const auto prefix = n == 1 ? "u:" : n == 2 ? "b:" : "t:";
    const auto width = static_cast<std::size_t>(n);
    FeatureBag bag;
    for (const auto& s : doc.sentences) {
        const auto& toks = s.tokens;
        if (toks.size() < width) continue;
        for (std::size_t i = 0; i + width <= toks.size(); ++i) {
            std::string f(prefix);
            for (std::size_t k = 0; k < width; ++k) {
                if (k) f += '_';
                f += toks[i + k].surface;
            }
            bag.add(std::move(f));
        }
    }
    return bag;
}

FeatureBag extract_polarized_unigrams(const Document& doc, const SubjectivityLexicon& lex) {
    FeatureBag bag;
    for (const auto& s : doc.sentences)
        for (const auto& t : s.tokens)
            if (auto core = polarized_core(t, lex); !core.empty()) bag.add("pu:" + core);
    return bag;
}

FeatureBag extract_polarized_bigrams(const Document& doc, const SubjectivityLexicon& lex) {
    FeatureBag bag;
    for (const auto& s : doc.sentences) {
        const auto& toks = s.tokens;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const auto core = polarized_core(toks[i], lex);
            if (core.empty()) continue;
            if (i > 0) {
                const auto& prev = toks[i - 1];
                bag.add("pb:" + prev.surface + "_" + core);
                bag.add("pb:" + prev.pos + "_" + core);
            }
            if (i + 1 < toks.size()) {
                const auto& next = toks[i + 1];
                bag.add("pb:" + core + "_" + next.surface);
                bag.add("pb:" + core + "_" + next.pos);
            }
        }
    }
    return bag;
}

FeatureBag extract_adjectives(const Document& doc) {
    FeatureBag bag;
    for (const auto& s : doc.sentences)
        for (const auto& t : s.tokens)
            if (is_adjective_tag(t.pos)) bag.add("adj:" + t.surface);
    return bag;
}

FeatureBag extract_adjadv_bigrams(const Document& doc) { return filtered_ngrams(doc, 2, "aab:"); }

FeatureBag extract_adjadv_trigrams(const Document& doc) { return filtered_ngrams(doc, 3, "aat:"); }

FeatureBag extract_transitions(const Document& doc, const TransitionList& transitions,
                               const SubjectivityLexicon* lex) {
    FeatureBag bag;
    std::vector<std::string_view> words;
    for (const auto& s : doc.sentences) {
        const auto& toks = s.tokens;
        words.clear();
        for (const auto& t : toks) words.push_back(t.bare());
        const auto matches = transitions.find(words);
        if (matches.empty()) continue;

        std::vector<bool> inside(toks.size(), false);
        std::set<std::size_t> phrases;
        for (const auto& m : matches) {
            phrases.insert(m.phrase);
            for (auto k = m.begin; k < m.end; ++k) inside[k] = true;
        }
        for (auto p : phrases) {
            const auto name = "tr:" + transitions.feature_name(p) + "_";
            for (std::size_t i = 0; i < toks.size(); ++i) {
                if (inside[i] || !coarse_class(toks[i].pos)) continue;
                bag.add(name + toks[i].surface);
                if (lex)
                    if (auto core = polarized_core(toks[i], *lex); !core.empty()) bag.add(name + core);
            }
        }
    }
    return bag;
}

FeatureBag extract_family(const Document& doc, FeatureFamily family, const FeatureResources& res) {
    if (needs_lexicon(family) && !res.lexicon)
        throw ConfigError("feature family '" + std::string(family_token(family)) +
                          "' needs a subjectivity lexicon");
    switch (family) {
        case FeatureFamily::Unigram: return extract_ngrams(doc, 1);
        case FeatureFamily::Bigram: return extract_ngrams(doc, 2);
        case FeatureFamily::Trigram: return extract_ngrams(doc, 3);
        case FeatureFamily::PolarizedUnigram: return extract_polarized_unigrams(doc, *res.lexicon);
        case FeatureFamily::PolarizedBigram: return extract_polarized_bigrams(doc, *res.lexicon);
        case FeatureFamily::Adjective: return extract_adjectives(doc);
        case FeatureFamily::AdjAdvBigram: return extract_adjadv_bigrams(doc);
        case FeatureFamily::AdjAdvTrigram: return extract_adjadv_trigrams(doc);
        case FeatureFamily::Transition:
            if (!res.transitions) throw ConfigError("transition features need a transition list");
            return extract_transitions(doc, *res.transitions, res.lexicon);
    }
    throw Error("unknown feature family");
}

FeatureBag extract(const Document& doc, const FeatureSpec& spec, const FeatureResources& res) {
    if (spec.families.empty()) throw ConfigError("feature spec names no families");
    if (spec.families.size() == 1) return extract_family(doc, spec.families.front(), res);
    FeatureBag bag;
    for (auto f : spec.families) bag.merge(extract_family(doc, f, res));
    return bag;
}

}  // namespace polarity
