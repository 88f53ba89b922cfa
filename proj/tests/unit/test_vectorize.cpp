#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "polarity/error.hpp"
#include "polarity/vectorize.hpp"

using namespace polarity;

namespace {

FeatureBag bag(std::initializer_list<std::pair<const char*, std::uint32_t>> items) {
    FeatureBag b;
    for (const auto& [f, c] : items) b.add(f, c);
    return b;
}

}  // namespace

TEST_CASE("vocabulary threshold") {
    const std::vector<FeatureBag> bags{bag({{"u:great", 3}, {"u:meh", 2}}), bag({{"u:great", 2}, {"u:meh", 2}})};
    const auto vocab = build_vocabulary(bags, 5);
    CHECK(vocab.size() == 1);
    CHECK(vocab.id("u:great") == 0u);
    CHECK_FALSE(vocab.id("u:meh").has_value());  // 4 occurrences
    CHECK(build_vocabulary(bags, 1).size() == 2);
    CHECK_THROWS_AS(build_vocabulary(bags, 100), DataError);
}

TEST_CASE("vocabulary ids are lexicographic and survive a text round trip") {
    const std::vector<FeatureBag> bags{bag({{"u:zeta", 1}, {"b:a_b", 1}, {"u:alpha", 1}})};
    const auto vocab = build_vocabulary(bags, 1);
    CHECK(vocab.features() == std::vector<std::string>{"b:a_b", "u:alpha", "u:zeta"});
    std::stringstream ss;
    vocab.write(ss);
    CHECK(ss.str() == "b:a_b\nu:alpha\nu:zeta\n");
    CHECK(Vocabulary::read(ss) == vocab);
    std::istringstream unsorted("u:b\nu:a\n");
    CHECK_THROWS_AS(Vocabulary::read(unsorted), DataError);
}

TEST_CASE("presence and frequency vectors") {
    const auto vocab = build_vocabulary(std::vector<FeatureBag>{bag({{"u:good", 1}, {"u:plot", 1}})}, 1);
    const auto b = bag({{"u:good", 3}, {"u:unseen", 2}});
    const auto pres = vectorize(b, vocab, Representation::Presence);
    const auto freq = vectorize(b, vocab, Representation::Frequency);
    CHECK(pres.entries == std::vector<std::pair<std::uint32_t, double>>{{0, 1.0}});
    CHECK(freq.entries == std::vector<std::pair<std::uint32_t, double>>{{0, 3.0}});
    CHECK(vectorize(FeatureBag{}, vocab, Representation::Frequency).entries.empty());
    CHECK(freq.squared_norm() == 9.0);
    CHECK(parse_representation("binary") == Representation::Presence);
    CHECK(parse_representation("freq") == Representation::Frequency);
    CHECK_THROWS_AS(parse_representation("tfidf"), ConfigError);
}

TEST_CASE("svmlight examples and errors") {
    SparseVector v{{{0, 1.0}, {4, 2.5}}, Label::Positive};
    CHECK(to_svmlight(v) == "+1 1:1 5:2.5");
    CHECK(parse_svmlight_line("+1 1:1 5:2.5") == v);
    CHECK(parse_svmlight_line("-1 3:1 # doc cv001").label == Label::Negative);
    CHECK_FALSE(parse_svmlight_line("0 1:2").label.has_value());

    auto expect_error = [](std::string_view line, std::size_t column) {
        try {
            parse_svmlight_line(line, 7);
            FAIL("expected a parse error for " << line);
        } catch (const ParseError& e) {
            CHECK(e.line() == 7);
            CHECK(e.column() == column);
        }
    };
    expect_error("", 1);
    expect_error("+2 1:1", 1);
    expect_error("+1 0:1", 2);
    expect_error("+1 2:1 2:1", 3);
    expect_error("+1 3:1 nonsense", 3);
    expect_error("-1 1:-4", 2);
    expect_error("-1 1:x", 2);
}

TEST_CASE("property: presence is clamped frequency, svmlight round trip, monotone threshold") {
    std::mt19937 rng(5);
    std::vector<std::string> names{"u:a", "u:b", "b:a_b", "pu:POS/JJ", "adj:odd", "tr:but_plot", "u:NOT_good"};
    std::uniform_int_distribution<std::uint32_t> count(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FeatureBag> bags(1 + rng() % 6);
        for (auto& b : bags)
            for (const auto& n : names) b.add(n, count(rng));
        bool nonempty = false;
        for (const auto& b : bags) nonempty |= !b.empty();
        if (!nonempty) continue;

        const auto vocab = build_vocabulary(bags, 1);
        std::vector<SparseVector> vecs;
        for (const auto& b : bags) {
            const auto pres = vectorize(b, vocab, Representation::Presence);
            auto freq = vectorize(b, vocab, Representation::Frequency);
            REQUIRE(pres.entries.size() == freq.entries.size());
            for (std::size_t i = 0; i < pres.entries.size(); ++i) {
                CHECK(pres.entries[i].first == freq.entries[i].first);
                CHECK(pres.entries[i].second == std::min(1.0, freq.entries[i].second));
                if (i) CHECK(freq.entries[i - 1].first < freq.entries[i].first);
            }
            freq.label = rng() % 2 ? Label::Positive : Label::Negative;
            vecs.push_back(freq);
        }
        std::stringstream ss;
        write_svmlight(ss, vecs);
        CHECK(read_svmlight(ss) == vecs);

        // Raising the threshold can only shrink the vocabulary.
        std::size_t prev = vocab.size();
        for (std::uint32_t m = 2; m <= 8; ++m) {
            std::size_t sz = 0;
            try {
                sz = build_vocabulary(bags, m).size();
            } catch (const DataError&) {
            }
            CHECK(sz <= prev);
            prev = sz;
        }
    }
}
