#include "polarity/vectorize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "polarity/error.hpp"

namespace polarity {

std::string_view to_string(Representation rep) {
    return rep == Representation::Presence ? "presence" : "frequency";
}

Representation parse_representation(std::string_view text) {
    if (text == "presence" || text == "binary") return Representation::Presence;
    if (text == "frequency" || text == "freq") return Representation::Frequency;
    throw ConfigError("unknown representation '" + std::string(text) + "' (expected presence or frequency)");
}

Vocabulary::Vocabulary(std::vector<std::string> features, std::uint32_t min_count)
    : features_(std::move(features)), min_count_(min_count) {
    index_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (i > 0 && !(features_[i - 1] < features_[i]))
            throw Error("vocabulary features must be sorted and unique");
        index_.emplace(features_[i], static_cast<std::uint32_t>(i));
    }
}

std::optional<std::uint32_t> Vocabulary::id(std::string_view feature) const {
    auto it = index_.find(feature);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::write(std::ostream& out) const {
    for (const auto& f : features_) out << f << '\n';
}

Vocabulary Vocabulary::read(std::istream& in, std::uint32_t min_count) {
    std::vector<std::string> features;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        features.push_back(line);
    }
    try {
        return Vocabulary(std::move(features), min_count);
    } catch (const Error&) {
        throw DataError("vocabulary file is not sorted and unique");
    }
}

Vocabulary build_vocabulary(std::span<const FeatureBag> bags, std::uint32_t min_count) {
    std::unordered_map<std::string_view, std::uint64_t> totals;
    for (const auto& bag : bags)
        for (const auto& [f, c] : bag) totals[f] += c;
    std::vector<std::string> kept;
    for (const auto& [f, c] : totals)
        if (c >= min_count) kept.emplace_back(f);
    if (kept.empty()) throw DataError("vocabulary is empty after pruning at min_count " + std::to_string(min_count));
    std::sort(kept.begin(), kept.end());
    return Vocabulary(std::move(kept), min_count);
}

double SparseVector::squared_norm() const {
    double s = 0;
    for (const auto& [id, v] : entries) s += v * v;
    return s;
}

SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab, Representation rep) {
    SparseVector v;
    for (const auto& [f, c] : bag) {
        auto id = vocab.id(f);
        if (!id) continue;
        v.entries.emplace_back(*id, rep == Representation::Presence ? 1.0 : static_cast<double>(c));
    }
    std::sort(v.entries.begin(), v.entries.end());
    return v;
}

namespace {

void append_number(std::string& out, double value) {
    char buf[32];
    // Shortest representation that round-trips.
    auto r = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, r.ptr);
}

[[noreturn]] void bad_line(std::size_t line_number, std::size_t column, const std::string& why) {
    throw ParseError("svmlight line " + std::to_string(line_number) + ", column " +
                         std::to_string(column) + ": " + why,
                     line_number, column);
}

}  // namespace

std::string to_svmlight(const SparseVector& v) {
    std::string out = !v.label ? "0" : *v.label == Label::Positive ? "+1" : "-1";
    for (const auto& [id, value] : v.entries) {
        out += ' ';
        out += std::to_string(static_cast<std::uint64_t>(id) + 1);
        out += ':';
        append_number(out, value);
    }
    return out;
}

SparseVector parse_svmlight_line(std::string_view line, std::size_t line_number) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream ss{std::string(line)};
    std::string tok;
    SparseVector v;
    if (!(ss >> tok)) bad_line(line_number, 1, "missing label");
    if (tok == "+1" || tok == "1")
        v.label = Label::Positive;
    else if (tok == "-1")
        v.label = Label::Negative;
    else if (tok != "0")
        bad_line(line_number, 1, "label must be +1, -1 or 0");
    std::size_t column = 1;
    while (ss >> tok) {
        ++column;
        auto colon = tok.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
            bad_line(line_number, column, "expected <id>:<value>, got '" + tok + "'");
        std::uint64_t id = 0;
        double value = 0;
        auto r1 = std::from_chars(tok.data(), tok.data() + colon, id);
        auto r2 = std::from_chars(tok.data() + colon + 1, tok.data() + tok.size(), value);
        if (r1.ec != std::errc{} || r1.ptr != tok.data() + colon || r2.ec != std::errc{} ||
            r2.ptr != tok.data() + tok.size())
            bad_line(line_number, column, "malformed pair '" + tok + "'");
        if (id == 0 || id > 0xFFFFFFFFULL) bad_line(line_number, column, "ids are 1-based");
        if (!std::isfinite(value) || value < 0) bad_line(line_number, column, "values must be finite and >= 0");
        const auto zid = static_cast<std::uint32_t>(id - 1);
        if (!v.entries.empty() && v.entries.back().first >= zid)
            bad_line(line_number, column, "ids must be strictly increasing");
        if (value > 0) v.entries.emplace_back(zid, value);
    }
    return v;
}

void write_svmlight(std::ostream& out, std::span<const SparseVector> vectors) {
    for (const auto& v : vectors) out << to_svmlight(v) << '\n';
}

std::vector<SparseVector> read_svmlight(std::istream& in) {
    std::vector<SparseVector> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(parse_svmlight_line(line, n));
    }
    return out;
}

}  // namespace polarity
