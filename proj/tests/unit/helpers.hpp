#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "polarity/preprocess.hpp"

namespace testing {

// A scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("polarity_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    void write(const std::string& rel, const std::string& text) const {
        auto p = path_ / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
    }

private:
    std::filesystem::path path_;
};

// "word_TAG word_TAG" per sentence; NOT_ prefixes are honoured.
inline polarity::Document tagged_doc(const std::vector<std::string>& sentences) {
    polarity::Document doc;
    doc.id = "doc";
    for (const auto& s : sentences) {
        polarity::Sentence sentence;
        std::istringstream ss(s);
        std::string tok;
        while (ss >> tok) {
            auto us = tok.rfind('_');
            polarity::Token t;
            t.surface = tok.substr(0, us);
            t.pos = tok.substr(us + 1);
            t.negated = t.surface.starts_with("NOT_");
            sentence.tokens.push_back(t);
        }
        doc.sentences.push_back(sentence);
    }
    return doc;
}

inline const std::vector<std::string>& tag_pool() {
    static const std::vector<std::string> tags{"NN", "NNS", "VB", "VBD", "VBP", "JJ", "JJR", "RB", "DT", "IN", "PRP"};
    return tags;
}

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> words{"good", "bad", "movie", "plot", "love", "not", "great",
                                                "boring", "although", "but", "the", "a", "really", "however",
                                                "NOT_good", "NOT_bad", "!", "?", "famous", "dull"};
    return words;
}

inline polarity::Document random_doc(std::mt19937& rng, int max_sentences = 4, int max_len = 9) {
    polarity::Document doc;
    doc.id = "rand";
    std::uniform_int_distribution<int> ns(0, max_sentences), len(1, max_len);
    std::uniform_int_distribution<std::size_t> w(0, word_pool().size() - 1), t(0, tag_pool().size() - 1);
    for (int s = ns(rng); s > 0; --s) {
        polarity::Sentence sentence;
        for (int i = len(rng); i > 0; --i) {
            polarity::Token tok;
            tok.surface = word_pool()[w(rng)];
            tok.pos = tag_pool()[t(rng)];
            tok.negated = tok.surface.starts_with("NOT_");
            sentence.tokens.push_back(tok);
        }
        doc.sentences.push_back(sentence);
    }
    return doc;
}

}  // namespace testing
