#include <doctest.h>

#include <sstream>

#include "polarity/error.hpp"
#include "polarity/tagger.hpp"

using namespace polarity;

namespace {

std::vector<std::string> tag(const PosTagger& t, const std::string& text) {
    std::istringstream ss(text);
    std::vector<std::string> words;
    std::string w;
    while (ss >> w) words.push_back(w);
    return t.tag(words);
}

}  // namespace

TEST_CASE("tag inventory") {
    CHECK(is_known_tag("JJ"));
    CHECK(is_known_tag("PRP$"));
    CHECK_FALSE(is_known_tag("XYZ"));
    CHECK_FALSE(is_known_tag(""));
}

TEST_CASE("builtin tagger: closed class, suffixes and fallback") {
    RuleTagger t;
    CHECK(t.guess("quickly") == "RB");
    CHECK(t.guess("famous") == "JJ");
    CHECK(t.guess("wonderful") == "JJ");
    CHECK(t.guess("watchable") == "JJ");
    CHECK(t.guess("zorblat") == t.fallback_tag());
    CHECK(t.fallback_tag() == "NN");
    CHECK(t.guess("1999") == "CD");
    CHECK(tag(t, "").empty());
    CHECK(tag(t, "the movie") == std::vector<std::string>{"DT", "NN"});
}

TEST_CASE("builtin tagger: worked examples") {
    RuleTagger t;
    CHECK(tag(t, "i highly recommend this movie") == std::vector<std::string>{"PRP", "RB", "VB", "DT", "NN"});
    CHECK(tag(t, "although the director is famous") == std::vector<std::string>{"IN", "DT", "NN", "VBZ", "JJ"});
}

TEST_CASE("every builtin tag is in the inventory") {
    RuleTagger t;
    for (const auto& tg : tag(t, "she would never have thought the ending so unbelievably predictable , but it was"))
        CHECK(is_known_tag(tg));
}

TEST_CASE("contextual rules") {
    CHECK_THROWS_AS(parse_context_rule("NN VB PREVTAG"), ParseError);
    CHECK_THROWS_AS(parse_context_rule("NN VB NOSUCHTEMPLATE TO"), ParseError);
    CHECK_THROWS_AS(parse_context_rule("NN VB SURROUNDTAG DT"), ParseError);
    const auto r = parse_context_rule("NN VB PREVBIGRAM DT TO");
    CHECK(r.from == "NN");
    CHECK(r.to == "VB");
    CHECK(r.arg2 == "TO");

    RuleTagger t;
    const auto before = t.rule_count();
    std::istringstream rules(";;; comment\nJJ NN NEXTWD zorp\n");
    t.add_rules(rules);
    CHECK(t.rule_count() == before + 1);
    CHECK(tag(t, "big zorp").front() == "NN");
}

TEST_CASE("external lexicon overrides builtin entries and skips unknown tags") {
    RuleTagger t;
    std::istringstream lex(";;; header\nflick NN\nsnazzy JJ\nweird |\n");
    const auto before = t.lexicon_size();
    t.add_lexicon(lex);
    CHECK(t.lexicon_size() == before + 2);
    CHECK(tag(t, "snazzy") == std::vector<std::string>{"JJ"});
    CHECK_THROWS_AS(t.set_word("x", "BOGUS"), ConfigError);
}

TEST_CASE("pretagged reader refuses to tag raw words") {
    PretaggedReader r;
    CHECK(r.reads_pretagged_input());
    CHECK_THROWS_AS(tag(r, "a b"), ConfigError);
}
