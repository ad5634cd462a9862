#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <unordered_map>

#include <json.hpp>

#include "factadapt/adapters.hpp"

namespace factadapt {

class WhitespaceTokenizer final : public Tokenizer {
public:
    std::vector<std::string> tokenize(const std::string& text) const override;
    std::size_t char_to_token(const std::string& text, std::size_t char_index) const override;
};

// Exact-lookup scorer. Queries missing from the table return default_prob.
// Immutable after construction, safe for concurrent use.
class TableScorer final : public LikelihoodScorer {
public:
    explicit TableScorer(double default_prob = 0.5, std::string id = "table");

    std::string id() const override { return id_; }
    double first_token_likelihood(const std::string& document,
                                  std::span<const std::string> summary_prefix,
                                  const std::string& candidate_first_token) const override;

    // Throws InvalidProbability outside [0,1].
    void add(const std::string& document, const std::vector<std::string>& prefix,
             const std::string& token, double probability);

    std::size_t size() const { return table_.size(); }

private:
    std::string id_;
    double default_prob_;
    std::unordered_map<std::string, double> table_;
};

// Builds a TableScorer from {"id"?, "default_prob"?, "entries": [{"document",
// "prefix" (array or whitespace string), "token", "p"}]}.
TableScorer table_scorer_from_config(const nlohmann::ordered_json& config);

// Deterministic pseudo-random probabilities derived from a seed and the full
// query. Gives dense variety without enumerating a table.
class HashedScorer final : public LikelihoodScorer {
public:
    explicit HashedScorer(std::uint64_t seed) : seed_(seed) {}
    std::string id() const override { return "hashed-" + std::to_string(seed_); }
    double first_token_likelihood(const std::string& document,
                                  std::span<const std::string> summary_prefix,
                                  const std::string& candidate_first_token) const override;

private:
    std::uint64_t seed_;
};

// Regex-driven recognizer: leftmost-longest non-overlapping matches across
// all patterns. Throws BadPattern when a pattern fails to compile.
class RegexEntityRecognizer final : public EntityRecognizer {
public:
    explicit RegexEntityRecognizer(const std::map<std::string, std::vector<std::string>>& patterns);
    std::vector<RawMention> extract(const std::string& text) const override;

private:
    std::vector<std::pair<std::string, std::regex>> patterns_;  // (category, regex)
};

// Loads {"CATEGORY": ["regex", ...], ...}.
RegexEntityRecognizer regex_recognizer_from_config(const nlohmann::ordered_json& config);

// Fraction in [0,100] of summary words that occur word-bounded in the
// document. Desk-scale stand-in for a consistency scoring function.
double lexical_consistency_double(const std::string& document, const std::string& summary);

class LexicalOverlapScorer final : public ConsistencyScorer {
public:
    std::string id() const override { return "lexical-overlap"; }
    double score(const std::string& document, const std::string& summary) const override {
        return lexical_consistency_double(document, summary);
    }
};

// Returns the first sentence of the document (up to '.', '!' or '?').
class LeadSentenceGenerator final : public SummaryGenerator {
public:
    std::string id() const override { return "lead-sentence"; }
    std::string generate(const std::string& document) const override;
};

}  // namespace factadapt
