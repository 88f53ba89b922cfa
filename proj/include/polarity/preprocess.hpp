#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/tagger.hpp"

namespace polarity {

inline constexpr std::string_view kNegationPrefix = "NOT_";

struct Token {
    std::string surface;  // lowercase, may carry the NOT_ prefix
    std::string pos;      // Penn Treebank tag
    bool negated = false;

    // Surface without the NOT_ prefix.
    std::string_view bare() const;

    bool operator==(const Token&) const = default;
};

struct Sentence {
    std::vector<Token> tokens;

    bool operator==(const Sentence&) const = default;
};

struct Document {
    std::string id;
    Label label = Label::Positive;
    std::vector<Sentence> sentences;

    std::size_t token_count() const;
    bool operator==(const Document&) const = default;
};

struct PreprocessConfig {
    bool apply_negation = false;
    std::set<std::string> negation_triggers{"not"};
    std::set<char> punctuation_keep{'!', '?'};
    std::shared_ptr<const PosTagger> tagger;  // null: tokens keep an empty tag
};

/// Rewrites the n't family ("isn't" -> "is not", "won't" -> "will not", ...).
/// Other contractions pass through unchanged.
std::string expand_contractions(std::string_view text);

/// Removes ASCII punctuation except the characters in `keep`, which become
/// standalone whitespace-separated tokens.
std::string strip_punctuation(std::string_view text, const std::set<char>& keep);

std::vector<std::string> split_whitespace(std::string_view text);

/// Lowercased tokens of one line after contraction expansion and punctuation removal.
std::vector<std::string> tokenize_line(std::string_view line, const std::set<char>& keep);

Sentence make_sentence(const std::vector<std::string>& words);

/// Prefixes NOT_ to every token after a trigger up to the next kept
/// punctuation token or the end of the sentence. Triggers stay untagged.
Sentence tag_negation(Sentence sentence, const std::set<std::string>& triggers,
                      const std::set<char>& terminators = {'!', '?'});

/// Tags the bare surfaces; the NOT_ prefix is preserved on the token.
Sentence tag_pos(Sentence sentence, const PosTagger& tagger);

/// Parses one pre-tagged line of "word_TAG" tokens. Contractions inside a
/// token are expanded (the "not" part receives RB), punctuation is removed
/// from words, and tokens left empty are dropped.
Sentence parse_pretagged_line(std::string_view line, std::size_t line_number,
                              const std::set<char>& keep);

/// expand_contractions -> lines -> strip_punctuation -> tokenize
///   -> tag_negation (if enabled) -> tag_pos.
Document preprocess_document(const RawDocument& doc, const PreprocessConfig& cfg);

std::vector<Document> preprocess_corpus(const Corpus& corpus, const PreprocessConfig& cfg,
                                        unsigned jobs = 1);

}  // namespace polarity
