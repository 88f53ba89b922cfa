#include "polarity/preprocess.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "polarity/error.hpp"

namespace polarity {

namespace {

struct Contraction {
    std::string_view from;
    std::string_view to;
};

constexpr std::array<Contraction, 22> kContractions{{
    {"ain't", "am not"},       {"aren't", "are not"},     {"can't", "can not"},
    {"couldn't", "could not"}, {"daren't", "dare not"},   {"didn't", "did not"},
    {"doesn't", "does not"},   {"don't", "do not"},       {"hadn't", "had not"},
    {"hasn't", "has not"},     {"haven't", "have not"},   {"isn't", "is not"},
    {"mightn't", "might not"}, {"mustn't", "must not"},   {"needn't", "need not"},
    {"oughtn't", "ought not"}, {"shan't", "shall not"},   {"shouldn't", "should not"},
    {"wasn't", "was not"},     {"weren't", "were not"},   {"won't", "will not"},
    {"wouldn't", "would not"},
}};

bool is_word_char(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '\'';
}

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::string_view> lookup_contraction(std::string_view lower) {
    for (const auto& c : kContractions)
        if (c.from == lower) return c.to;
    return std::nullopt;
}

// Carries the capitalization of `original` over to `expansion`.
std::string match_case(std::string_view original, std::string_view expansion) {
    std::string out(expansion);
    const bool all_upper = std::none_of(original.begin(), original.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c)) != 0;
    });
    if (all_upper && original.size() > 1) {
        for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    } else if (!original.empty() && std::isupper(static_cast<unsigned char>(original[0]))) {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

bool is_terminator(const Token& t, const std::set<char>& terminators) {
    return t.surface.size() == 1 && terminators.contains(t.surface[0]);
}

}  // namespace

std::string_view Token::bare() const {
    std::string_view s = surface;
    if (s.starts_with(kNegationPrefix)) s.remove_prefix(kNegationPrefix.size());
    return s;
}

std::size_t Document::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
}

std::string expand_contractions(std::string_view text) {
    std::string out;
    out.reserve(text.size() + text.size() / 16);
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_char(text[j])) ++j;
        std::string_view word = text.substr(i, j - i);
        if (auto expansion = lookup_contraction(lowercase(word)))
            out += match_case(word, *expansion);
        else
            out += word;
        i = j;
    }
    return out;
}

std::string strip_punctuation(std::string_view text, const std::set<char>& keep) {
    std::string out;
    out.reserve(text.size());
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        if (start != 0) out.push_back('\n');

        std::string line;
        for (char c : text.substr(start, end - start)) {
            if (keep.contains(c)) {
                line.push_back(' ');
                line.push_back(c);
                line.push_back(' ');
            } else if (!is_punct(c)) {
                line.push_back(c);
            }
        }
        bool first = true;
        for (const auto& w : split_whitespace(line)) {
            if (!first) out.push_back(' ');
            out += w;
            first = false;
        }
        start = end + 1;
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) words.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return words;
}

std::vector<std::string> tokenize_line(std::string_view line, const std::set<char>& keep) {
    auto words = split_whitespace(strip_punctuation(expand_contractions(line), keep));
    for (auto& w : words) w = lowercase(w);
    return words;
}

Sentence make_sentence(const std::vector<std::string>& words) {
    Sentence s;
    s.tokens.reserve(words.size());
    for (const auto& w : words) {
        Token t;
        t.surface = w;
        t.negated = w.starts_with(kNegationPrefix);
        s.tokens.push_back(std::move(t));
    }
    return s;
}

Sentence tag_negation(Sentence sentence, const std::set<std::string>& triggers,
                      const std::set<char>& terminators) {
    bool in_scope = false;
    for (auto& token : sentence.tokens) {
        if (is_terminator(token, terminators)) {
            in_scope = false;
            continue;
        }
        if (triggers.contains(std::string(token.bare()))) {
            in_scope = true;
            continue;
        }
        if (in_scope && !token.negated) {
            token.surface.insert(0, kNegationPrefix);
            token.negated = true;
        }
    }
    return sentence;
}

Sentence tag_pos(Sentence sentence, const PosTagger& tagger) {
    if (tagger.reads_pretagged_input()) {
        for (std::size_t i = 0; i < sentence.tokens.size(); ++i)
            if (sentence.tokens[i].pos.empty())
                throw ParseError("token '" + sentence.tokens[i].surface + "' has no tag", 0, i + 1);
        return sentence;
    }
    std::vector<std::string> words;
    words.reserve(sentence.tokens.size());
    for (const auto& t : sentence.tokens) words.emplace_back(t.bare());
    auto tags = tagger.tag(words);
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) sentence.tokens[i].pos = std::move(tags[i]);
    return sentence;
}

Sentence parse_pretagged_line(std::string_view line, std::size_t line_number,
                              const std::set<char>& keep) {
    Sentence sentence;
    std::size_t column = 0;
    for (const auto& item : split_whitespace(line)) {
        ++column;
        const auto sep = item.rfind('_');
        if (sep == std::string::npos || sep == 0 || sep + 1 == item.size())
            throw ParseError("malformed pre-tagged token '" + item + "' (expected word_TAG)",
                             line_number, column);
        std::string word = item.substr(0, sep);
        std::string tag = item.substr(sep + 1);
        if (!is_known_tag(tag))
            throw ParseError("unknown tag '" + tag + "' in token '" + item + "'", line_number, column);

        std::string lower = lowercase(word);
        std::vector<std::pair<std::string, std::string>> pieces;
        if (lower == "n't") {
            pieces.emplace_back("not", "RB");
        } else if (auto expansion = lookup_contraction(lower)) {
            auto parts = split_whitespace(*expansion);
            pieces.emplace_back(parts.at(0), tag);
            pieces.emplace_back(parts.at(1), "RB");
        } else {
            pieces.emplace_back(std::move(lower), std::move(tag));
        }

        for (auto& [w, t] : pieces) {
            if (w.size() == 1 && keep.contains(w[0])) {
                sentence.tokens.push_back(Token{w, t, false});
                continue;
            }
            std::string cleaned;
            for (char c : w)
                if (!is_punct(c)) cleaned.push_back(c);
            if (cleaned.empty()) continue;
            sentence.tokens.push_back(Token{std::move(cleaned), std::move(t), false});
        }
    }
    return sentence;
}

Document preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg) {
    Document out;
    out.id = doc.id;
    out.label = doc.label;

    const bool pretagged = cfg.tagger && cfg.tagger->reads_pretagged_input();
    const std::string text = pretagged ? doc.text : expand_contractions(doc.text);

    std::size_t start = 0;
    std::size_t line_number = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + start, end - start);
        ++line_number;
        start = end + 1;

        Sentence sentence;
        if (pretagged) {
            try {
                sentence = parse_pretagged_line(line, line_number, cfg.punctuation_keep);
            } catch (const ParseError& e) {
                throw ParseError(doc.id + ": line " + std::to_string(e.line()) + ", token " +
                                     std::to_string(e.column()) + ": " + e.what(),
                                 e.line(), e.column());
            }
        } else {
            auto words = split_whitespace(strip_punctuation(line, cfg.punctuation_keep));
            for (auto& w : words) w = lowercase(w);
            sentence = make_sentence(words);
        }
        if (sentence.tokens.empty()) continue;

        if (cfg.apply_negation)
            sentence = tag_negation(std::move(sentence), cfg.negation_triggers, cfg.punctuation_keep);
        if (cfg.tagger) sentence = tag_pos(std::move(sentence), *cfg.tagger);
        out.sentences.push_back(std::move(sentence));
    }
    return out;
}

std::vector<Document> preprocess_corpus(const Corpus& corpus, const PreprocessConfig& cfg,
                                        unsigned jobs) {
    const auto& docs = corpus.documents();
    std::vector<Document> out(docs.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(docs.size())));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < docs.size(); ++i) out[i] = preprocess_document(docs[i], cfg);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < docs.size(); i = next++) {
                try {
                    out[i] = preprocess_document(docs[i], cfg);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace polarity
