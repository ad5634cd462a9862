#pragma once

#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "factadapt/types.hpp"

namespace factadapt {

struct RawMention {
    std::string surface;
    std::string category;
    CharSpan span;
    bool operator==(const RawMention&) const = default;
};

// First-token conditional likelihood of a candidate given a context document
// and a tokenized summary prefix. One interface serves both the pre-trained
// and the fine-tuned model roles; only the id differs.
class LikelihoodScorer {
public:
    virtual ~LikelihoodScorer() = default;
    virtual std::string id() const = 0;
    // Must be deterministic and return a value in [0,1].
    virtual double first_token_likelihood(const std::string& document,
                                          std::span<const std::string> summary_prefix,
                                          const std::string& candidate_first_token) const = 0;
    // Implementations unsafe for concurrent calls return false; the pipeline
    // serializes access to them.
    virtual bool thread_safe() const { return true; }
};

class SummaryGenerator {
public:
    virtual ~SummaryGenerator() = default;
    virtual std::string id() const = 0;
    virtual std::string generate(const std::string& document) const = 0;
};

// Factual-consistency scoring function. Output scale is adapter-defined.
class ConsistencyScorer {
public:
    virtual ~ConsistencyScorer() = default;
    virtual std::string id() const = 0;
    virtual double score(const std::string& document, const std::string& summary) const = 0;
};

class EntityRecognizer {
public:
    virtual ~EntityRecognizer() = default;
    // Spans are within bounds and non-overlapping, ordered by start.
    virtual std::vector<RawMention> extract(const std::string& text) const = 0;
};

class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<std::string> tokenize(const std::string& text) const = 0;
    // Token index containing char_index, or the index of the next token when
    // the character lies between tokens. Monotone non-decreasing.
    virtual std::size_t char_to_token(const std::string& text, std::size_t char_index) const = 0;
};

// First token of an entity surface under the given tokenizer.
std::string first_token(const std::string& surface, const Tokenizer& tokenizer);

// Serializes calls to a scorer that declared itself unsafe for concurrent
// use; the pipeline wraps such scorers before fanning out workers.
class SerializedScorer final : public LikelihoodScorer {
public:
    explicit SerializedScorer(const LikelihoodScorer& inner) : inner_(inner) {}
    std::string id() const override { return inner_.id(); }
    double first_token_likelihood(const std::string& document,
                                  std::span<const std::string> summary_prefix,
                                  const std::string& candidate_first_token) const override {
        std::lock_guard<std::mutex> lock(mutex_);
        return inner_.first_token_likelihood(document, summary_prefix, candidate_first_token);
    }

private:
    const LikelihoodScorer& inner_;
    mutable std::mutex mutex_;
};

}  // namespace factadapt
