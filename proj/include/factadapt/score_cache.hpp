#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "factadapt/adapters.hpp"

namespace factadapt {

// File-backed likelihood cache keyed by (scorer id, document hash, prefix
// hash, token). Probabilities are persisted as raw IEEE-754 bit patterns, so
// a hit is bit-identical to the original call. Reads are concurrent; writes
// are serialized and appended to the backing file immediately.
class ScoreCache {
public:
    explicit ScoreCache(std::filesystem::path file);

    std::optional<double> lookup(const std::string& scorer_id, const std::string& document,
                                 std::span<const std::string> prefix,
                                 const std::string& token) const;
    void store(const std::string& scorer_id, const std::string& document,
               std::span<const std::string> prefix, const std::string& token, double probability);

    std::size_t size() const;

private:
    static std::string key_of(const std::string& scorer_id, const std::string& document,
                              std::span<const std::string> prefix, const std::string& token);

    std::filesystem::path file_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, double> entries_;
};

// Memoizing decorator around any likelihood scorer.
class CachedScorer final : public LikelihoodScorer {
public:
    CachedScorer(const LikelihoodScorer& inner, ScoreCache& cache)
        : inner_(inner), cache_(cache) {}

    std::string id() const override { return inner_.id(); }
    double first_token_likelihood(const std::string& document,
                                  std::span<const std::string> summary_prefix,
                                  const std::string& candidate_first_token) const override;
    bool thread_safe() const override { return inner_.thread_safe(); }

private:
    const LikelihoodScorer& inner_;
    ScoreCache& cache_;
};

}  // namespace factadapt
