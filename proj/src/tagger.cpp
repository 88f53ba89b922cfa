#include "polarity/tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "polarity/error.hpp"

namespace polarity {

namespace {

constexpr std::string_view kBoundary = "STAART";

constexpr std::string_view kTagInventory[] = {
    "CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR",  "JJS",   "LS",    "MD", "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB",  "RBR",   "RBS",   "RP", "SYM",
    "TO",  "UH",  "VB",   "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT",  "WP",    "WP$",   "WRB",
    ".",   ",",   ":",    "``",  "''",  "-LRB-", "-RRB-", "#", "$", "(", ")",
};

struct WordTag {
    std::string_view word;
    std::string_view tag;
};

// Closed-class words plus a few very frequent open-class words. Open-class
// coverage comes from an external lexicon when one is loaded.
constexpr WordTag kBuiltinLexicon[] = {
    // determiners
    {"a", "DT"}, {"an", "DT"}, {"the", "DT"}, {"this", "DT"}, {"that", "DT"}, {"these", "DT"},
    {"those", "DT"}, {"some", "DT"}, {"any", "DT"}, {"no", "DT"}, {"every", "DT"}, {"each", "DT"},
    {"another", "DT"}, {"either", "DT"}, {"neither", "DT"}, {"all", "DT"}, {"both", "DT"},
    {"half", "PDT"}, {"such", "JJ"},
    // pronouns
    {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"}, {"we", "PRP"},
    {"they", "PRP"}, {"me", "PRP"}, {"him", "PRP"}, {"her", "PRP$"}, {"us", "PRP"}, {"them", "PRP"},
    {"myself", "PRP"}, {"yourself", "PRP"}, {"himself", "PRP"}, {"herself", "PRP"},
    {"itself", "PRP"}, {"ourselves", "PRP"}, {"themselves", "PRP"}, {"my", "PRP$"},
    {"your", "PRP$"}, {"his", "PRP$"}, {"its", "PRP$"}, {"our", "PRP$"}, {"their", "PRP$"},
    {"mine", "PRP"}, {"yours", "PRP"}, {"theirs", "PRP"}, {"one", "CD"},
    {"there", "EX"}, {"someone", "NN"}, {"something", "NN"}, {"nothing", "NN"},
    {"anything", "NN"}, {"everything", "NN"}, {"everyone", "NN"}, {"nobody", "NN"},
    {"anyone", "NN"}, {"somebody", "NN"},
    // wh-words
    {"who", "WP"}, {"whom", "WP"}, {"whose", "WP$"}, {"what", "WP"}, {"which", "WDT"},
    {"whatever", "WDT"}, {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"}, {"how", "WRB"},
    {"whenever", "WRB"}, {"wherever", "WRB"},
    // prepositions and subordinators
    {"of", "IN"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"by", "IN"}, {"for", "IN"},
    {"with", "IN"}, {"from", "IN"}, {"about", "IN"}, {"into", "IN"}, {"onto", "IN"},
    {"over", "IN"}, {"under", "IN"}, {"between", "IN"}, {"through", "IN"}, {"during", "IN"},
    {"before", "IN"}, {"after", "IN"}, {"above", "IN"}, {"below", "IN"}, {"against", "IN"},
    {"among", "IN"}, {"around", "IN"}, {"without", "IN"}, {"within", "IN"}, {"upon", "IN"},
    {"toward", "IN"}, {"towards", "IN"}, {"across", "IN"}, {"behind", "IN"}, {"beyond", "IN"},
    {"like", "IN"}, {"unlike", "IN"}, {"than", "IN"}, {"as", "IN"}, {"if", "IN"},
    {"because", "IN"}, {"although", "IN"}, {"though", "IN"}, {"while", "IN"}, {"whereas", "IN"},
    {"unless", "IN"}, {"until", "IN"}, {"since", "IN"}, {"despite", "IN"}, {"whether", "IN"},
    {"throughout", "IN"}, {"per", "IN"}, {"via", "IN"}, {"out", "RP"}, {"off", "RP"},
    {"up", "RP"}, {"down", "RP"}, {"away", "RB"}, {"to", "TO"},
    // conjunctions
    {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"yet", "CC"}, {"plus", "CC"},
    // modals and auxiliaries
    {"can", "MD"}, {"could", "MD"}, {"will", "MD"}, {"would", "MD"}, {"shall", "MD"},
    {"should", "MD"}, {"may", "MD"}, {"might", "MD"}, {"must", "MD"}, {"ought", "MD"},
    {"be", "VB"}, {"am", "VBP"}, {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"}, {"were", "VBD"},
    {"been", "VBN"}, {"being", "VBG"}, {"have", "VBP"}, {"has", "VBZ"}, {"had", "VBD"},
    {"having", "VBG"}, {"do", "VBP"}, {"does", "VBZ"}, {"did", "VBD"}, {"done", "VBN"},
    {"get", "VB"}, {"gets", "VBZ"}, {"got", "VBD"}, {"make", "VB"}, {"makes", "VBZ"},
    {"made", "VBN"}, {"see", "VB"}, {"seen", "VBN"}, {"saw", "VBD"}, {"go", "VB"},
    {"goes", "VBZ"}, {"went", "VBD"}, {"gone", "VBN"}, {"take", "VB"}, {"takes", "VBZ"},
    {"took", "VBD"}, {"taken", "VBN"}, {"say", "VB"}, {"says", "VBZ"}, {"said", "VBD"},
    {"know", "VB"}, {"knows", "VBZ"}, {"knew", "VBD"}, {"known", "VBN"}, {"think", "VBP"},
    {"thinks", "VBZ"}, {"thought", "VBD"}, {"seem", "VBP"}, {"seems", "VBZ"}, {"come", "VB"},
    {"comes", "VBZ"}, {"came", "VBD"}, {"give", "VB"}, {"gives", "VBZ"}, {"gave", "VBD"},
    {"given", "VBN"}, {"find", "VB"}, {"found", "VBD"}, {"want", "VBP"}, {"wants", "VBZ"},
    {"love", "NN"}, {"recommend", "VB"}, {"become", "VB"}, {"becomes", "VBZ"},
    {"became", "VBD"}, {"let", "VB"}, {"keep", "VB"}, {"tell", "VB"}, {"tells", "VBZ"},
    {"told", "VBD"}, {"feel", "VB"}, {"feels", "VBZ"}, {"felt", "VBD"}, {"look", "VB"},
    {"looks", "VBZ"}, {"try", "VB"}, {"tries", "VBZ"}, {"begin", "VB"}, {"began", "VBD"},
    // adverbs
    {"not", "RB"}, {"never", "RB"}, {"very", "RB"}, {"too", "RB"}, {"so", "RB"}, {"also", "RB"},
    {"just", "RB"}, {"only", "RB"}, {"even", "RB"}, {"still", "RB"}, {"really", "RB"},
    {"quite", "RB"}, {"rather", "RB"}, {"almost", "RB"}, {"always", "RB"}, {"often", "RB"},
    {"ever", "RB"}, {"again", "RB"}, {"here", "RB"}, {"then", "RB"}, {"now", "RB"},
    {"however", "RB"}, {"perhaps", "RB"}, {"maybe", "RB"}, {"well", "RB"}, {"instead", "RB"},
    {"otherwise", "RB"}, {"nevertheless", "RB"}, {"nonetheless", "RB"}, {"conversely", "RB"},
    {"contrarily", "RB"}, {"alternatively", "RB"}, {"regardless", "RB"}, {"notwithstanding", "RB"},
    {"anyway", "RB"}, {"already", "RB"}, {"soon", "RB"}, {"yes", "UH"}, {"oh", "UH"},
    {"more", "RBR"}, {"most", "RBS"}, {"less", "RBR"}, {"least", "RBS"}, {"much", "RB"},
    {"enough", "RB"}, {"once", "RB"}, {"twice", "RB"}, {"together", "RB"}, {"somewhat", "RB"},
    {"else", "RB"}, {"later", "RB"}, {"back", "RB"}, {"far", "RB"}, {"simply", "RB"},
    // frequent adjectives
    {"good", "JJ"}, {"bad", "JJ"}, {"great", "JJ"}, {"best", "JJS"}, {"better", "JJR"},
    {"worst", "JJS"}, {"worse", "JJR"}, {"new", "JJ"}, {"old", "JJ"}, {"big", "JJ"},
    {"little", "JJ"}, {"few", "JJ"}, {"many", "JJ"}, {"other", "JJ"}, {"own", "JJ"},
    {"same", "JJ"}, {"real", "JJ"}, {"whole", "JJ"}, {"young", "JJ"}, {"long", "JJ"},
    {"short", "JJ"}, {"funny", "JJ"}, {"nice", "JJ"}, {"fine", "JJ"}, {"true", "JJ"},
    {"high", "JJ"}, {"low", "JJ"}, {"last", "JJ"}, {"first", "JJ"}, {"next", "JJ"},
    {"original", "JJ"}, {"dull", "JJ"}, {"boring", "JJ"}, {"stupid", "JJ"}, {"smart", "JJ"},
    {"dead", "JJ"}, {"able", "JJ"}, {"hard", "JJ"}, {"easy", "JJ"}, {"sure", "JJ"},
    {"special", "JJ"}, {"strong", "JJ"}, {"weak", "JJ"}, {"poor", "JJ"}, {"rich", "JJ"},
    {"perfect", "JJ"}, {"awful", "JJ"}, {"terrible", "JJ"}, {"excellent", "JJ"},
    {"wonderful", "JJ"}, {"beautiful", "JJ"}, {"famous", "JJ"}, {"main", "JJ"},
    {"entire", "JJ"}, {"full", "JJ"}, {"different", "JJ"}, {"interesting", "JJ"},
    {"predictable", "JJ"}, {"human", "JJ"}, {"black", "JJ"}, {"white", "JJ"}, {"simple", "JJ"},
    {"clear", "JJ"}, {"dark", "JJ"}, {"cheap", "JJ"}, {"top", "JJ"}, {"fun", "NN"},
    // frequent nouns that suffix rules would mis-tag
    {"movie", "NN"}, {"film", "NN"}, {"films", "NNS"}, {"movies", "NNS"}, {"story", "NN"},
    {"plot", "NN"}, {"director", "NN"}, {"series", "NN"}, {"news", "NN"}, {"family", "NN"},
    {"ally", "NN"}, {"rally", "NN"}, {"reply", "NN"}, {"supply", "NN"}, {"sense", "NN"},
    {"thing", "NN"}, {"things", "NNS"}, {"king", "NN"},
    {"ring", "NN"}, {"wedding", "NN"}, {"evening", "NN"}, {"morning", "NN"}, {"ending", "NN"},
    {"beginning", "NN"}, {"feeling", "NN"}, {"meeting", "NN"}, {"building", "NN"},
    {"need", "NN"}, {"bed", "NN"}, {"speed", "NN"}, {"seed", "NN"}, {"red", "JJ"},
    {"hundred", "CD"}, {"kind", "NN"}, {"time", "NN"}, {"way", "NN"}, {"life", "NN"},
    {"man", "NN"}, {"world", "NN"}, {"character", "NN"}, {"characters", "NNS"}, {"scene", "NN"},
    {"scenes", "NNS"}, {"performance", "NN"}, {"end", "NN"}, {"lot", "NN"}, {"bit", "NN"},
    {"!", "."}, {"?", "."},
};

std::vector<std::string> tokenize_line(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

bool all_digits_or_numeric(std::string_view w) {
    bool any_digit = false;
    for (char c : w) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            any_digit = true;
        } else if (c != '.' && c != ',' && c != '-' && c != 's') {
            return false;
        }
    }
    return any_digit;
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() > suffix.size() + 1 && w.ends_with(suffix);
}

// Built-in contextual rules, applied after lexicon lookup and suffix guessing.
constexpr std::string_view kBuiltinRules[] = {
    "NN VB PREVTAG TO",
    "NN VB PREVTAG MD",
    "NN VB PREV1OR2TAG MD",
    "NN VBP PREVWD i",
    "NN VBP PREVWD you",
    "NN VBP PREVWD we",
    "NN VBP PREVWD they",
    "NNS VBZ PREVWD he",
    "NNS VBZ PREVWD she",
    "NNS VBZ PREVWD it",
    "VB NN PREVTAG DT",
    "VBP NN PREVTAG DT",
    "VB NN PREVTAG PRP$",
    "VBP NN PREVTAG PRP$",
    "VB NN PREVTAG JJ",
    "VBD VBN PREV1OR2WD have",
    "VBD VBN PREV1OR2WD has",
    "VBD VBN PREV1OR2WD had",
    "VBD VBN PREV1OR2OR3TAG VBZ",
    "VBD VBN PREVTAG VBD",
    "VBD VBN PREVTAG VBP",
    "VBD VBN PREVTAG VB",
    "VBN VBD PREVTAG PRP",
    "VBN VBD PREVTAG NN",
    "VBN VBD PREVTAG NNS",
    "VBP VB PREVTAG TO",
    "VBP VB PREV1OR2TAG MD",
    "VBG NN PREVTAG DT",
    "VBG JJ SURROUNDTAG DT NN",
    "IN RB NEXTTAG .",
    "IN VB PREVTAG TO",
    "JJ NN NEXTWD of",
};

}  // namespace

bool is_known_tag(std::string_view tag) {
    return std::find(std::begin(kTagInventory), std::end(kTagInventory), tag) != std::end(kTagInventory);
}

ContextRule parse_context_rule(std::string_view line) {
    auto parts = tokenize_line(line);
    if (parts.size() < 4)
        throw ParseError("contextual rule needs FROM TO TEMPLATE ARG1 [ARG2]: '" + std::string(line) + "'",
                         0);
    ContextRule rule{parts[0], parts[1], parts[2], parts[3], ""};
    static const std::unordered_set<std::string> two_arg{
        "SURROUNDTAG", "PREVBIGRAM", "NEXTBIGRAM", "WDPREVTAG", "WDNEXTTAG", "WDAND2TAGBFR",
        "WDAND2TAGAFT", "LBIGRAM",  "RBIGRAM",   "WDAND2BFR", "WDAND2AFT"};
    static const std::unordered_set<std::string> one_arg{
        "PREVTAG", "NEXTTAG", "PREV1OR2TAG", "NEXT1OR2TAG", "PREV1OR2OR3TAG", "NEXT1OR2OR3TAG",
        "PREV2TAG", "NEXT2TAG", "PREVWD",    "NEXTWD",      "CURWD",          "PREV1OR2WD",
        "NEXT1OR2WD", "PREV2WD", "NEXT2WD"};
    const bool needs_two = two_arg.contains(rule.templ);
    if (!needs_two && !one_arg.contains(rule.templ))
        throw ParseError("unknown rule template '" + rule.templ + "'", 0);
    // Trailing tokens beyond the template's arity are ignored, as in Brill's own reader.
    if (needs_two) {
        if (parts.size() < 5) throw ParseError("template '" + rule.templ + "' needs two arguments", 0);
        rule.arg2 = parts[4];
    }
    return rule;
}

RuleTagger::RuleTagger() {
    for (const auto& [word, tag] : kBuiltinLexicon) lexicon_.emplace(word, tag);
    for (auto rule : kBuiltinRules) rules_.push_back(parse_context_rule(rule));
}

void RuleTagger::set_word(std::string word, std::string tag) {
    if (!is_known_tag(tag)) throw ConfigError("unknown tag '" + tag + "'");
    lexicon_[std::move(word)] = std::move(tag);
}

void RuleTagger::add_lexicon(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line.starts_with(";;;") || line.starts_with('#')) continue;
        auto parts = tokenize_line(line);
        if (parts.empty()) continue;
        if (parts.size() < 2)
            throw ParseError("tagger lexicon line " + std::to_string(line_number) + " has no tag",
                             line_number);
        const auto& tag = parts[1];
        if (!is_known_tag(tag)) continue;  // tags outside the inventory, e.g. "|"
        std::string word = parts[0];
        for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        // Lowercase duplicates of capitalized entries keep the first (lowercase) reading.
        if (word != parts[0] && lexicon_.contains(word)) continue;
        lexicon_[word] = tag;
    }
}

void RuleTagger::add_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tagger lexicon " + path.string());
    add_lexicon(in);
}

void RuleTagger::add_rules(std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.starts_with(";;;") || line.starts_with('#')) continue;
        if (tokenize_line(line).empty()) continue;
        try {
            rules_.push_back(parse_context_rule(line));
        } catch (const ParseError& e) {
            throw ParseError("rule file line " + std::to_string(line_number) + ": " + e.what(),
                             line_number);
        }
    }
}

void RuleTagger::add_rules_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tagger rules " + path.string());
    add_rules(in);
}

std::string RuleTagger::guess(std::string_view w) const {
    if (w.empty()) return std::string(fallback_tag());
    if (all_digits_or_numeric(w)) return "CD";
    if (w.find('-') != std::string_view::npos) return "JJ";
    if (ends_with(w, "ly")) return "RB";
    if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "able") || ends_with(w, "ible") ||
        ends_with(w, "ive") || ends_with(w, "less") || ends_with(w, "ish") || ends_with(w, "ic") ||
        ends_with(w, "al") || ends_with(w, "ary"))
        return "JJ";
    if (ends_with(w, "est") && w.size() > 5) return "JJS";
    if (ends_with(w, "ing")) return "VBG";
    if (ends_with(w, "ed")) return "VBD";
    if (ends_with(w, "tion") || ends_with(w, "ment") || ends_with(w, "ness") || ends_with(w, "ity") ||
        ends_with(w, "ism") || ends_with(w, "ship"))
        return "NN";
    if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is"))
        return "NNS";
    return std::string(fallback_tag());
}

std::vector<std::string> RuleTagger::tag(std::span<const std::string> words) const {
    std::vector<std::string> tags;
    tags.reserve(words.size());
    for (const auto& w : words) {
        auto it = lexicon_.find(w);
        tags.push_back(it != lexicon_.end() ? it->second : guess(w));
    }

    const auto n = static_cast<long>(words.size());
    auto tag_at = [&](long i) -> std::string_view {
        return i < 0 || i >= n ? kBoundary : std::string_view(tags[static_cast<std::size_t>(i)]);
    };
    auto word_at = [&](long i) -> std::string_view {
        return i < 0 || i >= n ? kBoundary : std::string_view(words[static_cast<std::size_t>(i)]);
    };

    for (const auto& r : rules_) {
        const std::string_view a = r.arg1;
        const std::string_view b = r.arg2;
        for (long i = 0; i < n; ++i) {
            if (tags[static_cast<std::size_t>(i)] != r.from) continue;
            const auto& t = r.templ;
            bool hit = false;
            if (t == "PREVTAG") hit = tag_at(i - 1) == a;
            else if (t == "NEXTTAG") hit = tag_at(i + 1) == a;
            else if (t == "PREV1OR2TAG") hit = tag_at(i - 1) == a || tag_at(i - 2) == a;
            else if (t == "NEXT1OR2TAG") hit = tag_at(i + 1) == a || tag_at(i + 2) == a;
            else if (t == "PREV1OR2OR3TAG")
                hit = tag_at(i - 1) == a || tag_at(i - 2) == a || tag_at(i - 3) == a;
            else if (t == "NEXT1OR2OR3TAG")
                hit = tag_at(i + 1) == a || tag_at(i + 2) == a || tag_at(i + 3) == a;
            else if (t == "PREV2TAG") hit = tag_at(i - 2) == a;
            else if (t == "NEXT2TAG") hit = tag_at(i + 2) == a;
            else if (t == "SURROUNDTAG") hit = tag_at(i - 1) == a && tag_at(i + 1) == b;
            else if (t == "PREVBIGRAM") hit = tag_at(i - 2) == a && tag_at(i - 1) == b;
            else if (t == "NEXTBIGRAM") hit = tag_at(i + 1) == a && tag_at(i + 2) == b;
            else if (t == "PREVWD") hit = word_at(i - 1) == a;
            else if (t == "NEXTWD") hit = word_at(i + 1) == a;
            else if (t == "CURWD") hit = word_at(i) == a;
            else if (t == "PREV1OR2WD") hit = word_at(i - 1) == a || word_at(i - 2) == a;
            else if (t == "NEXT1OR2WD") hit = word_at(i + 1) == a || word_at(i + 2) == a;
            else if (t == "PREV2WD") hit = word_at(i - 2) == a;
            else if (t == "NEXT2WD") hit = word_at(i + 2) == a;
            else if (t == "WDPREVTAG") hit = tag_at(i - 1) == a && word_at(i) == b;
            else if (t == "WDNEXTTAG") hit = word_at(i) == a && tag_at(i + 1) == b;
            else if (t == "WDAND2TAGBFR") hit = tag_at(i - 2) == a && word_at(i) == b;
            else if (t == "WDAND2TAGAFT") hit = word_at(i) == a && tag_at(i + 2) == b;
            else if (t == "LBIGRAM") hit = word_at(i - 1) == a && word_at(i) == b;
            else if (t == "RBIGRAM") hit = word_at(i) == a && word_at(i + 1) == b;
            else if (t == "WDAND2BFR") hit = word_at(i - 2) == a && word_at(i) == b;
            else if (t == "WDAND2AFT") hit = word_at(i) == a && word_at(i + 2) == b;
            if (hit) tags[static_cast<std::size_t>(i)] = r.to;
        }
    }
    return tags;
}

std::vector<std::string> PretaggedReader::tag(std::span<const std::string>) const {
    throw ConfigError("the pretagged reader takes tags from the input; it cannot tag raw words");
}

std::shared_ptr<const PosTagger> make_builtin_tagger(const std::filesystem::path& lexicon,
                                                     const std::filesystem::path& rules) {
    auto tagger = std::make_shared<RuleTagger>();
    if (!lexicon.empty()) tagger->add_lexicon_file(lexicon);
    if (!rules.empty()) tagger->add_rules_file(rules);
    return tagger;
}

}  // namespace polarity
