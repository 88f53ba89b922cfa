#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "polarity/error.hpp"
#include "polarity/features.hpp"

using namespace polarity;
using testing::tagged_doc;

namespace {

SubjectivityLexicon small_lexicon() {
    std::istringstream in("love\tpositive\nrecommend\tpositive\nfamous\tpositive\ngood\tpositive\n"
                          "great\tpositive\nbad\tnegative\nboring\tnegative\ndull\tnegative\n");
    return parse_lexicon(in, LexiconFormat::Tsv);
}

std::set<std::string> keys(const FeatureBag& bag) {
    std::set<std::string> out;
    for (const auto& [f, c] : bag) out.insert(f);
    return out;
}

}  // namespace

TEST_CASE("n-grams") {
    const auto doc = tagged_doc({"i_PRP love_VBP it_PRP"});
    const auto b = extract_ngrams(doc, 2);
    CHECK(keys(b) == std::set<std::string>{"b:i_love", "b:love_it"});
    CHECK(b.count("b:i_love") == 1);
    CHECK(extract_ngrams(tagged_doc({"good_JJ"}), 3).empty());
    CHECK(keys(extract_ngrams(tagged_doc({"NOT_good_JJ"}), 1)) == std::set<std::string>{"u:NOT_good"});
    CHECK_THROWS_AS(extract_ngrams(doc, 4), ConfigError);
}

TEST_CASE("polarized unigrams") {
    const auto lex = small_lexicon();
    CHECK(extract_polarized_unigrams(tagged_doc({"i_PRP love_VB that_DT movie_NN"}), lex).contains("pu:POS/VB"));
    CHECK(extract_polarized_unigrams(tagged_doc({"the_DT movie_NN"}), lex).empty());
    CHECK(extract_polarized_unigrams(tagged_doc({"love_VB it_PRP", "love_VB"}), lex).count("pu:POS/VB") == 2);
    CHECK(extract_polarized_unigrams(tagged_doc({"NOT_good_JJ"}), lex).contains("pu:POS/JJ"));
}

TEST_CASE("golden: polarized bigrams of the recommend sentence") {
    const auto lex = small_lexicon();
    const auto bag = extract_polarized_bigrams(tagged_doc({"i_PRP highly_RB recommend_VB this_DT movie_NN"}), lex);
    CHECK(keys(bag) ==
          std::set<std::string>{"pb:highly_POS/VB", "pb:RB_POS/VB", "pb:POS/VB_this", "pb:POS/VB_DT"});
}

TEST_CASE("polarized bigram boundaries") {
    const auto lex = small_lexicon();
    CHECK(extract_polarized_bigrams(tagged_doc({"great_JJ"}), lex).empty());
    const auto start = extract_polarized_bigrams(tagged_doc({"great_JJ film_NN"}), lex);
    CHECK(keys(start) == std::set<std::string>{"pb:POS/JJ_film", "pb:POS/JJ_NN"});
}

TEST_CASE("adjectives and adjective/adverb n-grams") {
    CHECK(keys(extract_adjectives(tagged_doc({"famous_JJ director_NN"}))) == std::set<std::string>{"adj:famous"});
    CHECK(extract_adjectives(tagged_doc({"the_DT movie_NN"})).empty());
    CHECK(keys(extract_adjectives(tagged_doc({"better_JJR"}))) == std::set<std::string>{"adj:better"});

    CHECK(keys(extract_adjadv_bigrams(tagged_doc({"highly_RB recommend_VB"}))) ==
          std::set<std::string>{"aab:highly_recommend"});
    CHECK(extract_adjadv_bigrams(tagged_doc({"the_DT movie_NN"})).empty());
    CHECK(keys(extract_adjadv_bigrams(tagged_doc({"really_RB really_RB"}))) ==
          std::set<std::string>{"aab:really_really"});

    CHECK(extract_adjadv_trigrams(tagged_doc({"recommend_VB staying_VBG away_RB"}))
              .contains("aat:recommend_staying_away"));
    CHECK(extract_adjadv_trigrams(tagged_doc({"film_NN crew_NN studio_NN"})).empty());
    CHECK(extract_adjadv_trigrams(tagged_doc({"very_RB good_JJ"})).empty());
}

TEST_CASE("golden: transition features of the although sentence") {
    const auto lex = small_lexicon();
    const auto trans = default_transitions();
    const auto bag = extract_transitions(tagged_doc({"although_IN the_DT director_NN is_VBZ famous_JJ"}), trans, &lex);
    CHECK(keys(bag) == std::set<std::string>{"tr:although_director", "tr:although_is", "tr:although_famous",
                                             "tr:although_POS/JJ"});
}

TEST_CASE("transition edge cases") {
    const auto lex = small_lexicon();
    const auto trans = default_transitions();
    CHECK(extract_transitions(tagged_doc({"the_DT movie_NN is_VBZ good_JJ"}), trans, &lex).empty());
    CHECK(extract_transitions(tagged_doc({"but_CC nothing_NN"}), trans, &lex).size() == 1);
    CHECK(extract_transitions(tagged_doc({"but_CC it_PRP"}), trans, &lex).empty());
    const auto multi = extract_transitions(
        tagged_doc({"on_IN the_DT other_JJ hand_NN it_PRP bores_VBZ but_CC works_VBZ"}), trans, &lex);
    CHECK(multi.contains("tr:on_the_other_hand_bores"));
    CHECK(multi.contains("tr:but_bores"));
    CHECK_FALSE(multi.contains("tr:on_the_other_hand_hand"));
    CHECK_FALSE(multi.contains("tr:but_but"));
}

TEST_CASE("feature spec parsing") {
    const auto s = FeatureSpec::parse("unigram+pb+t");
    CHECK(s.families == std::vector<FeatureFamily>{FeatureFamily::Unigram, FeatureFamily::PolarizedBigram,
                                                   FeatureFamily::Transition});
    CHECK(s.to_string() == "unigram+pb+t");
    CHECK(FeatureSpec::parse(s.to_string()) == s);
    CHECK(FeatureSpec::parse("3adjadv+pb").contains(FeatureFamily::AdjAdvTrigram));
    CHECK(FeatureSpec::parse("PB+U") == FeatureSpec::parse("unigram+pb"));
    CHECK(s.requires_lexicon());
    CHECK_FALSE(FeatureSpec::parse("bigram+adj").requires_lexicon());
    CHECK_THROWS_WITH_AS(FeatureSpec::parse("bogus+pb"), doctest::Contains("3adjadv"), ConfigError);
    CHECK_THROWS_AS(FeatureSpec::parse("pb+pb"), ConfigError);
    CHECK_THROWS_AS(FeatureSpec::parse(""), ConfigError);
    CHECK_THROWS_AS(FeatureSpec::parse("unigram+"), ConfigError);
}

TEST_CASE("extract unions families") {
    const auto lex = small_lexicon();
    const auto trans = default_transitions();
    const FeatureResources res{&lex, &trans};
    const auto doc = tagged_doc({"i_PRP highly_RB recommend_VB this_DT movie_NN"});
    CHECK(extract(doc, FeatureSpec::parse("unigram"), res) == extract_ngrams(doc, 1));
    const auto both = extract(doc, FeatureSpec::parse("unigram+pb"), res);
    CHECK(both.size() == extract_ngrams(doc, 1).size() + extract_polarized_bigrams(doc, lex).size());
    CHECK(extract(doc, FeatureSpec::parse("3adjadv+pb+t"), res).contains("pb:RB_POS/VB"));
    CHECK_THROWS_AS(extract(doc, FeatureSpec::parse("pu"), FeatureResources{}), ConfigError);
    CHECK_THROWS_AS(extract(doc, FeatureSpec{}, res), ConfigError);
}

TEST_CASE("feature bag text form is sorted") {
    FeatureBag bag;
    bag.add("u:b");
    bag.add("u:a", 2);
    bag.add("u:b");
    CHECK(bag.to_text() == "u:a\t2\nu:b\t2\n");
    CHECK(bag.total() == 4);
}

TEST_CASE("property: namespaces, monotone union, locality, determinism, pb cores") {
    const auto lex = small_lexicon();
    const auto trans = default_transitions();
    const FeatureResources res{&lex, &trans};
    std::mt19937 rng(17);
    std::vector<FeatureFamily> all(std::begin(kAllFamilies), std::end(kAllFamilies));
    for (int trial = 0; trial < 150; ++trial) {
        const auto doc = testing::random_doc(rng);

        std::vector<std::set<std::string>> per_family;
        for (auto f : all) {
            const auto bag = extract_family(doc, f, res);
            for (const auto& [name, c] : bag) {
                CHECK(name.starts_with(namespace_prefix(f)));
                CHECK(c >= 1);
            }
            per_family.push_back(keys(bag));
        }
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = a + 1; b < all.size(); ++b)
                for (const auto& k : per_family[a]) CHECK(per_family[b].count(k) == 0);

        // Random subset vs superset.
        std::vector<FeatureFamily> sub, super;
        for (auto f : all) {
            const bool in_super = rng() % 2;
            if (in_super) super.push_back(f);
            if (in_super && rng() % 2) sub.push_back(f);
        }
        if (!sub.empty()) {
            FeatureSpec s1{sub, false}, s2{super, false};
            const auto k1 = keys(extract(doc, s1, res));
            const auto k2 = keys(extract(doc, s2, res));
            for (const auto& k : k1) CHECK(k2.count(k) == 1);
            CHECK(extract(doc, s2, res) == extract(doc, s2, res));
        }

        // Locality: extracting sentence by sentence and summing gives the same bag.
        for (auto f : all) {
            FeatureBag summed;
            for (const auto& s : doc.sentences) {
                Document one;
                one.sentences.push_back(s);
                summed.merge(extract_family(one, f, res));
            }
            CHECK(summed == extract_family(doc, f, res));
        }

        // Every pb core is also a pu feature of the same document.
        const auto pu = keys(extract_polarized_unigrams(doc, lex));
        for (const auto& [name, c] : extract_polarized_bigrams(doc, lex)) {
            const auto body = name.substr(3);
            bool found = false;
            for (const auto& p : pu) {
                const auto core = p.substr(3);
                if (body.starts_with(core + "_") || body.ends_with("_" + core)) found = true;
            }
            CHECK(found);
        }
    }
}
