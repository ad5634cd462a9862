#include "factadapt/doubles.hpp"

#include <algorithm>

#include "factadapt/hash.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

std::vector<std::string> WhitespaceTokenizer::tokenize(const std::string& text) const {
    return split_whitespace(text);
}

std::size_t WhitespaceTokenizer::char_to_token(const std::string& text, std::size_t char_index) const {
    const auto spans = whitespace_token_spans(text);
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (char_index < spans[i].end) return i;
    }
    return spans.size();
}

std::string first_token(const std::string& surface, const Tokenizer& tokenizer) {
    auto tokens = tokenizer.tokenize(surface);
    if (tokens.empty()) throw EmptyEntity();
    return tokens.front();
}

namespace {

// Length-prefixed so no (document, prefix, token) triple can collide.
void append_field(std::string& key, const std::string& field) {
    key += std::to_string(field.size());
    key += ':';
    key += field;
}

std::string table_key(const std::string& document, std::span<const std::string> prefix,
                      const std::string& token) {
    std::string key;
    append_field(key, document);
    for (const auto& t : prefix) append_field(key, t);
    key += '|';
    append_field(key, token);
    return key;
}

}  // namespace

TableScorer::TableScorer(double default_prob, std::string id)
    : id_(std::move(id)), default_prob_(default_prob) {
    if (default_prob < 0.0 || default_prob > 1.0) throw InvalidProbability(default_prob);
}

double TableScorer::first_token_likelihood(const std::string& document,
                                           std::span<const std::string> summary_prefix,
                                           const std::string& candidate_first_token) const {
    auto it = table_.find(table_key(document, summary_prefix, candidate_first_token));
    return it == table_.end() ? default_prob_ : it->second;
}

void TableScorer::add(const std::string& document, const std::vector<std::string>& prefix,
                      const std::string& token, double probability) {
    if (probability < 0.0 || probability > 1.0) throw InvalidProbability(probability);
    table_[table_key(document, prefix, token)] = probability;
}

TableScorer table_scorer_from_config(const nlohmann::ordered_json& config) {
    const double default_prob = config.value("default_prob", 0.5);
    TableScorer scorer(default_prob, config.value("id", std::string("table")));
    if (config.contains("entries")) {
        for (const auto& entry : config.at("entries")) {
            std::vector<std::string> prefix;
            if (entry.contains("prefix")) {
                const auto& p = entry.at("prefix");
                if (p.is_string()) {
                    prefix = split_whitespace(p.get<std::string>());
                } else {
                    prefix = p.get<std::vector<std::string>>();
                }
            }
            scorer.add(entry.at("document").get<std::string>(), prefix,
                       entry.at("token").get<std::string>(), entry.at("p").get<double>());
        }
    }
    return scorer;
}

double HashedScorer::first_token_likelihood(const std::string& document,
                                            std::span<const std::string> summary_prefix,
                                            const std::string& candidate_first_token) const {
    std::uint64_t h = fnv1a64_u64(seed_);
    h = fnv1a64(document, h);
    for (const auto& t : summary_prefix) {
        h = fnv1a64_u64(t.size(), h);
        h = fnv1a64(t, h);
    }
    h = fnv1a64_u64(0x1f, h);
    h = fnv1a64(candidate_first_token, h);
    return hash_unit(h);
}

RegexEntityRecognizer::RegexEntityRecognizer(
    const std::map<std::string, std::vector<std::string>>& patterns) {
    for (const auto& [category, exprs] : patterns) {
        for (const auto& expr : exprs) {
            try {
                patterns_.emplace_back(category, std::regex(expr));
            } catch (const std::regex_error& e) {
                throw BadPattern("category " + category + ": " + expr + ": " + e.what());
            }
        }
    }
}

std::vector<RawMention> RegexEntityRecognizer::extract(const std::string& text) const {
    struct Candidate {
        std::size_t begin;
        std::size_t length;
        std::size_t pattern_index;
        std::string category;
    };
    std::vector<Candidate> candidates;
    for (std::size_t pi = 0; pi < patterns_.size(); ++pi) {
        const auto& [category, re] = patterns_[pi];
        auto begin = std::sregex_iterator(text.begin(), text.end(), re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            if (it->length(0) == 0) continue;
            candidates.push_back({static_cast<std::size_t>(it->position(0)),
                                  static_cast<std::size_t>(it->length(0)), pi, category});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.length != b.length) return a.length > b.length;  // longest wins
        return a.pattern_index < b.pattern_index;
    });
    std::vector<RawMention> out;
    std::size_t covered_end = 0;
    for (const auto& c : candidates) {
        if (c.begin < covered_end) continue;
        out.push_back({text.substr(c.begin, c.length), c.category, {c.begin, c.begin + c.length}});
        covered_end = c.begin + c.length;
    }
    return out;
}

RegexEntityRecognizer regex_recognizer_from_config(const nlohmann::ordered_json& config) {
    std::map<std::string, std::vector<std::string>> patterns;
    for (const auto& [category, exprs] : config.items()) {
        patterns[category] = exprs.get<std::vector<std::string>>();
    }
    return RegexEntityRecognizer(patterns);
}

namespace {

// Strips non-word characters from both ends, so "Turkey," matches "Turkey".
std::string strip_punct(const std::string& w) {
    std::size_t b = 0;
    std::size_t e = w.size();
    while (b < e && !is_word_char(w[b])) ++b;
    while (e > b && !is_word_char(w[e - 1])) --e;
    return w.substr(b, e - b);
}

}  // namespace

double lexical_consistency_double(const std::string& document, const std::string& summary) {
    std::vector<std::string> words;
    for (const auto& raw : split_whitespace(summary)) {
        auto w = strip_punct(raw);
        if (!w.empty()) words.push_back(std::move(w));
    }
    if (words.empty()) return 0.0;
    std::size_t present = 0;
    for (const auto& w : words) {
        if (contains_word_bounded(document, w)) ++present;
    }
    return 100.0 * static_cast<double>(present) / static_cast<double>(words.size());
}

std::string LeadSentenceGenerator::generate(const std::string& document) const {
    const std::size_t cut = document.find_first_of(".!?");
    if (cut == std::string::npos) return trim(document);
    return trim(document.substr(0, cut + 1));
}

}  // namespace factadapt
