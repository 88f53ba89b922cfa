#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/features.hpp"

namespace polarity {

enum class Representation { Presence, Frequency };

std::string_view to_string(Representation rep);
Representation parse_representation(std::string_view text);

inline constexpr std::uint32_t kDefaultMinCount = 5;

/// Feature string -> dense 0-based id, ids assigned in lexicographic order.
class Vocabulary {
public:
    Vocabulary() = default;
    /// `features` must be sorted and unique.
    Vocabulary(std::vector<std::string> features, std::uint32_t min_count);

    std::size_t size() const { return features_.size(); }
    bool empty() const { return features_.empty(); }
    std::uint32_t min_count() const { return min_count_; }
    std::optional<std::uint32_t> id(std::string_view feature) const;
    const std::string& feature(std::uint32_t id) const { return features_.at(id); }
    const std::vector<std::string>& features() const { return features_; }

    /// One feature per line, line number = id + 1.
    void write(std::ostream& out) const;
    static Vocabulary read(std::istream& in, std::uint32_t min_count = 1);

    bool operator==(const Vocabulary& o) const {
        return features_ == o.features_ && min_count_ == o.min_count_;
    }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };

    std::vector<std::string> features_;
    std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
    std::uint32_t min_count_ = 1;
};

/// Keeps features whose summed count over `bags` is >= min_count. Throws
/// DataError when nothing survives.
Vocabulary build_vocabulary(std::span<const FeatureBag> bags, std::uint32_t min_count = kDefaultMinCount);

struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;  // ids strictly increasing, values > 0
    std::optional<Label> label;

    double squared_norm() const;
    bool operator==(const SparseVector&) const = default;
};

SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab, Representation rep);

/// svmlight line: "<+1|-1|0> <id+1>:<value> ...", ids ascending. 0 marks an unlabeled vector.
std::string to_svmlight(const SparseVector& v);
SparseVector parse_svmlight_line(std::string_view line, std::size_t line_number = 0);

void write_svmlight(std::ostream& out, std::span<const SparseVector> vectors);
/// Skips blank lines and '#' comments; a trailing "# ..." on a data line is ignored.
std::vector<SparseVector> read_svmlight(std::istream& in);

}  // namespace polarity
