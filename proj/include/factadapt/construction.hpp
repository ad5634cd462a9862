#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "factadapt/adapters.hpp"
#include "factadapt/pool.hpp"
#include "factadapt/replacement.hpp"
#include "factadapt/rng.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// Entities present in both fields of the sample, excluded categories
// dropped, ordered by first appearance in the summary. Summary spans come
// from the recognizer; document spans are word-bounded occurrences of the
// surface, and mentions without any are dropped.
std::vector<EntityMention> extract_original_candidates(const Sample& sample,
                                                       const EntityRecognizer& ner,
                                                       const std::set<std::string>& excluded_categories,
                                                       const Tokenizer& tokenizer);

// Rank-fraction bucketing over 1-based ranks: rank r out of n lands in the
// group whose boundary interval (lo, hi] contains r/n. Ranks at fraction
// <= exclude_top belong to no group.
struct GroupPartition {
    std::vector<std::size_t> top;  // 0-based indices into the ranked order
    std::vector<std::size_t> mid;
    std::vector<std::size_t> bot;
};
GroupPartition partition_ranks(std::size_t n, const GroupBoundaries& boundaries);

// Sorts candidates by first-token likelihood under the scorer (descending,
// ties by frequency descending then surface ascending), partitions them, and
// draws k uniformly without replacement from the requested group. Returns
// fewer than k when the group is smaller; throws EmptyGroup when it is empty.
std::vector<std::string> rank_and_group(const std::vector<PoolEntry>& candidates,
                                        const LikelihoodScorer& scorer, const std::string& document,
                                        std::span<const std::string> summary_prefix,
                                        const GroupSpec& spec, SplitMix64& rng, std::size_t k,
                                        const Tokenizer& tokenizer);

struct ValidationOutcome {
    bool accepted = false;
    double score = 0.0;
};

// Unconditional-likelihood validation: the entity's first token scored
// against the null document and the summary prefix; accepted iff strictly
// above the threshold.
ValidationOutcome validate_s1(const EntityMention& mention,
                              std::span<const std::string> summary_tokens,
                              const LikelihoodScorer& scorer, const ValidationConfig& config,
                              const Tokenizer& tokenizer);

// Replaces each span with the mask token. Spans must be non-overlapping.
std::string mask_entity_spans(const std::string& text, const std::vector<CharSpan>& spans,
                              const std::string& mask_token);

// Masked variant: the conditioning context is the summary with every
// recognized entity span masked, instead of the null document.
ValidationOutcome validate_s1_masked(const EntityMention& mention,
                                     std::span<const std::string> summary_tokens,
                                     const std::string& masked_summary,
                                     const LikelihoodScorer& scorer, const ValidationConfig& config,
                                     const Tokenizer& tokenizer);

struct S2Outcome {
    bool accepted = false;
    double score = 0.0;  // likelihood difference, original minus counterfactual
    ReplacementResult counterfactual;
};

// Likelihood-difference validation: builds the counterfactual pair, scores
// the original entity in the original context and the counterfactual entity
// in the replaced context, and accepts iff the difference strictly exceeds
// the threshold. Replacement errors propagate.
S2Outcome validate_s2(const Sample& original, const EntityMention& mention,
                      const std::string& candidate_surface, const LikelihoodScorer& scorer,
                      const ValidationConfig& config, const Tokenizer& tokenizer,
                      std::size_t min_word_len = 2);

struct EvalSetOptions {
    ValidationConfig validation;
    GroupSpec group;
    std::uint64_t seed = 0;
    std::size_t fan_out = 1;        // counterfactuals drawn per accepted entity
    int max_per_sample = -1;        // cap on emitted counterfactuals per sample; -1 = all
    std::set<std::string> excluded_categories = default_excluded_categories();
    std::size_t min_word_len = 2;
    int workers = 1;
};

struct ReasonEntry {
    std::string sample_id;
    std::string stage;
    std::string code;  // NO_ENTITY | EMPTY_GROUP | BELOW_THRESHOLD | REPLACEMENT_ERROR
    bool operator==(const ReasonEntry&) const = default;
};

struct EvalSetResult {
    std::vector<CounterfactualSample> samples;
    std::vector<ReasonEntry> reasons;
    // Mentions whose group held fewer candidates than fan_out requested.
    std::size_t short_draws = 0;
};

// Full evaluation-set construction. Deterministic under a fixed seed for any
// worker count: per-sample randomness derives from (seed, sample id) and
// outputs are emitted in dataset order.
EvalSetResult build_eval_set(const std::vector<Sample>& dataset, const CandidatePool& pool,
                             const LikelihoodScorer& scorer, const EvalSetOptions& options,
                             const EntityRecognizer& ner, const Tokenizer& tokenizer);

struct ThresholdSearch {
    double target_fraction = 0.10;
    double tolerance = 0.01;
    double grid_step = 0.05;
};

// Largest grid threshold whose extraction fraction stays within tolerance
// below the target. The fraction is non-increasing in the threshold, so the
// grid is bisected. Throws ThresholdUnreachable when even the grid minimum
// extracts too little.
double search_threshold(const std::vector<Sample>& validation_set, const CandidatePool& pool,
                        const LikelihoodScorer& scorer, const EvalSetOptions& options,
                        const ThresholdSearch& search, const EntityRecognizer& ner,
                        const Tokenizer& tokenizer);

}  // namespace factadapt
