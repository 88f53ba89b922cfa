#include "polarity/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "polarity/error.hpp"

namespace polarity {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Returns nullopt for neutral/both; throws for anything unrecognized.
std::optional<Polarity> parse_polarity(std::string_view raw, std::size_t line_number) {
    const auto v = lowercase(raw);
    if (v == "positive" || v == "pos" || v == "+" || v == "+1" || v == "1" || v == "weakpos")
        return Polarity::Positive;
    if (v == "negative" || v == "neg" || v == "-" || v == "-1" || v == "weakneg")
        return Polarity::Negative;
    if (v == "neutral" || v == "both" || v == "neu" || v == "0") return std::nullopt;
    throw ParseError("line " + std::to_string(line_number) + ": unknown polarity '" +
                         std::string(raw) + "'",
                     line_number);
}

PosClass parse_pos_class(std::string_view raw, std::size_t line_number) {
    const auto v = lowercase(raw);
    if (v == "noun" || v == "n") return PosClass::Noun;
    if (v == "verb" || v == "v") return PosClass::Verb;
    if (v == "adj" || v == "adjective" || v == "a") return PosClass::Adjective;
    if (v == "adverb" || v == "adv" || v == "r") return PosClass::Adverb;
    if (v == "anypos" || v == "any" || v == "*") return PosClass::Any;
    throw ParseError("line " + std::to_string(line_number) + ": unknown part of speech '" +
                         std::string(raw) + "'",
                     line_number);
}

constexpr std::string_view kDefaultTransitions[] = {
    "although",     "but",          "however",        "though",          "yet",
    "nevertheless", "nonetheless",  "whereas",        "while",           "despite",
    "in spite of",  "on the other hand", "contrarily", "conversely",     "instead",
    "rather",       "otherwise",    "still",          "even so",         "regardless",
    "notwithstanding", "unlike",    "in contrast",    "alternatively",   "albeit",
    "except that",  "unless",
};

}  // namespace

std::string_view polarity_tag(Polarity p) { return p == Polarity::Positive ? "POS" : "NEG"; }

std::optional<PosClass> coarse_class(std::string_view tag) {
    if (tag.empty()) return std::nullopt;
    if (tag == "JJ" || tag == "JJR" || tag == "JJS") return PosClass::Adjective;
    if (tag == "RB" || tag == "RBR" || tag == "RBS") return PosClass::Adverb;
    if (tag[0] == 'N') return PosClass::Noun;
    if (tag[0] == 'V') return PosClass::Verb;
    return std::nullopt;
}

LexiconFormat parse_lexicon_format(std::string_view text) {
    const auto v = lowercase(text);
    if (v == "tff") return LexiconFormat::Tff;
    if (v == "tsv") return LexiconFormat::Tsv;
    throw ConfigError("unknown lexicon format '" + std::string(text) + "' (expected tff or tsv)");
}

void SubjectivityLexicon::add(std::string word, LexiconEntry entry) {
    auto& list = entries_[std::move(word)];
    if (std::find(list.begin(), list.end(), entry) == list.end()) list.push_back(entry);
}

std::span<const LexiconEntry> SubjectivityLexicon::entries(std::string_view word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) return {};
    return it->second;
}

LexiconReport SubjectivityLexicon::report() const {
    LexiconReport r;
    r.dropped_entries = dropped_;
    for (const auto& [word, list] : entries_) {
        bool pos = false, neg = false;
        for (const auto& e : list) {
            if (e.polarity == Polarity::Positive) {
                ++r.positive_entries;
                pos = true;
            } else {
                ++r.negative_entries;
                neg = true;
            }
        }
        r.positive_words += pos ? 1 : 0;
        r.negative_words += neg ? 1 : 0;
    }
    return r;
}

SubjectivityLexicon parse_lexicon(std::istream& in, LexiconFormat format) {
    SubjectivityLexicon lex;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto text = trim(line);
        if (text.empty() || text[0] == '#') continue;

        if (format == LexiconFormat::Tsv) {
            std::vector<std::string> cols;
            std::stringstream ss(text);
            std::string col;
            while (std::getline(ss, col, '\t')) cols.push_back(trim(col));
            if (cols.size() < 2 || cols.size() > 3 || cols[0].empty())
                throw ParseError("line " + std::to_string(line_number) +
                                     ": expected word<TAB>polarity[<TAB>pos]",
                                 line_number);
            auto polarity = parse_polarity(cols[1], line_number);
            const auto pos = cols.size() == 3 ? parse_pos_class(cols[2], line_number) : PosClass::Any;
            if (!polarity) {
                ++lex.dropped_;
                continue;
            }
            lex.add(lowercase(cols[0]), LexiconEntry{*polarity, pos});
            continue;
        }

        std::unordered_map<std::string, std::string> fields;
        std::stringstream ss(text);
        std::string item;
        while (ss >> item) {
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError("line " + std::to_string(line_number) + ": malformed field '" + item +
                                     "'",
                                 line_number);
            fields[item.substr(0, eq)] = item.substr(eq + 1);
        }
        auto word = fields.find("word1");
        auto prior = fields.find("priorpolarity");
        if (word == fields.end() || word->second.empty() || prior == fields.end())
            throw ParseError("line " + std::to_string(line_number) +
                                 ": missing word1 or priorpolarity field",
                             line_number);
        auto polarity = parse_polarity(prior->second, line_number);
        auto pos_field = fields.find("pos1");
        const auto pos = pos_field == fields.end() ? PosClass::Any
                                                   : parse_pos_class(pos_field->second, line_number);
        if (!polarity) {
            ++lex.dropped_;
            continue;
        }
        lex.add(lowercase(word->second), LexiconEntry{*polarity, pos});
    }
    if (lex.empty()) throw DataError("lexicon contains no positive or negative entries");
    return lex;
}

SubjectivityLexicon load_lexicon(const std::filesystem::path& path, LexiconFormat format) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon " + path.string());
    try {
        return parse_lexicon(in, format);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::optional<Polarity> polarity_of(std::string_view word, std::string_view tag,
                                    const SubjectivityLexicon& lexicon) {
    auto entries = lexicon.entries(word);
    if (entries.empty()) return std::nullopt;
    if (auto cls = coarse_class(tag)) {
        for (const auto& e : entries)
            if (e.pos == *cls) return e.polarity;
    }
    for (const auto& e : entries)
        if (e.pos == PosClass::Any) return e.polarity;
    return entries.front().polarity;
}

TransitionList::TransitionList(std::vector<std::string> phrases) {
    std::set<std::string> seen;
    std::vector<std::pair<std::string, std::vector<std::string>>> items;
    for (auto& p : phrases) {
        std::stringstream ss(lowercase(p));
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        if (toks.empty()) continue;
        std::string norm;
        for (const auto& tok : toks) norm += (norm.empty() ? "" : " ") + tok;
        if (!seen.insert(norm).second) continue;
        items.emplace_back(std::move(norm), std::move(toks));
    }
    if (items.empty()) throw DataError("transition list is empty");
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });
    for (auto& [phrase, toks] : items) {
        phrases_.push_back(std::move(phrase));
        tokens_.push_back(std::move(toks));
    }
}

std::string TransitionList::feature_name(std::size_t phrase) const {
    std::string name = phrases_.at(phrase);
    std::replace(name.begin(), name.end(), ' ', '_');
    return name;
}

std::vector<TransitionList::Match> TransitionList::find(std::span<const std::string_view> words) const {
    std::vector<Match> matches;
    std::size_t i = 0;
    while (i < words.size()) {
        bool matched = false;
        for (std::size_t p = 0; p < tokens_.size(); ++p) {
            const auto& toks = tokens_[p];
            if (i + toks.size() > words.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < toks.size() && ok; ++k) ok = words[i + k] == toks[k];
            if (!ok) continue;
            matches.push_back(Match{p, i, i + toks.size()});
            i += toks.size();
            matched = true;
            break;
        }
        if (!matched) ++i;
    }
    return matches;
}

TransitionList parse_transitions(std::istream& in) {
    std::vector<std::string> phrases;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto text = trim(line);
        if (!text.empty()) phrases.push_back(text);
    }
    return TransitionList(std::move(phrases));
}

TransitionList load_transitions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transition list " + path.string());
    try {
        return parse_transitions(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

TransitionList default_transitions() {
    return TransitionList(std::vector<std::string>(std::begin(kDefaultTransitions), std::end(kDefaultTransitions)));
}

}  // namespace polarity
