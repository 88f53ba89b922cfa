#pragma once

#include <filesystem>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polarity {

/// Penn Treebank tag inventory accepted everywhere a tag is stored.
bool is_known_tag(std::string_view tag);

class PosTagger {
public:
    virtual ~PosTagger() = default;

    /// Returns one tag per word. Words are lowercase and carry no NOT_ prefix.
    virtual std::vector<std::string> tag(std::span<const std::string> words) const = 0;

    /// True when tags come from the input text ("word_TAG") rather than tag().
    virtual bool reads_pretagged_input() const { return false; }

    virtual std::string_view name() const = 0;
};

/// One Brill-style contextual rule: "FROM TO TEMPLATE ARG1 [ARG2]".
struct ContextRule {
    std::string from;
    std::string to;
    std::string templ;
    std::string arg1;
    std::string arg2;
};

ContextRule parse_context_rule(std::string_view line);

/// Greedy lexicon tagger: word lookup, suffix rules for unknown words, then
/// contextual rewrite rules applied left to right, one rule at a time.
///
/// The built-in tables cover closed-class words and a small set of rules.
/// A Brill lexicon ("word TAG [TAG...]", first tag is the default) and a
/// Brill contextual-rule file can be layered on top.
class RuleTagger final : public PosTagger {
public:
    RuleTagger();

    void add_lexicon(std::istream& in);
    void add_lexicon_file(const std::filesystem::path& path);
    void add_rules(std::istream& in);
    void add_rules_file(const std::filesystem::path& path);

    void set_word(std::string word, std::string tag);

    std::vector<std::string> tag(std::span<const std::string> words) const override;
    std::string_view name() const override { return "builtin"; }

    std::string_view fallback_tag() const { return "NN"; }
    std::size_t lexicon_size() const { return lexicon_.size(); }
    std::size_t rule_count() const { return rules_.size(); }

    // Tag for a word absent from the lexicon, from its shape and suffix.
    std::string guess(std::string_view word) const;

private:
    std::unordered_map<std::string, std::string> lexicon_;
    std::vector<ContextRule> rules_;
};

/// Tags are already attached to tokens; tag() only passes them through.
class PretaggedReader final : public PosTagger {
public:
    std::vector<std::string> tag(std::span<const std::string> words) const override;
    bool reads_pretagged_input() const override { return true; }
    std::string_view name() const override { return "pretagged"; }
};

std::shared_ptr<const PosTagger> make_builtin_tagger(const std::filesystem::path& lexicon = {},
                                                     const std::filesystem::path& rules = {});

}  // namespace polarity
