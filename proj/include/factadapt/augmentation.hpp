#pragma once

#include <string>
#include <vector>

#include "factadapt/construction.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// Controls for counterfactual training-set construction. ratio is the size
// of the sampled augmentation set relative to the original training set; the
// threshold must be the one found for the matching evaluation set.
struct AugmentationConfig {
    double ratio = 0.1;
    Group group = Group::Mid;
    Scenario scenario = Scenario::S2;
    double threshold = 0.0;
    std::size_t negatives_per_sample = 1;
    std::uint64_t seed = 0;
};

void check(const AugmentationConfig& config);

struct ContrastiveProvenance {
    std::string source_id;
    std::string original_surface;
    std::vector<std::string> counterfactual_surfaces;
    bool operator==(const ContrastiveProvenance&) const = default;
};

// A document with its positive and negative summaries for contrastive
// training-set construction.
struct ContrastiveRecord {
    std::string document;
    std::vector<std::string> positives;
    std::vector<std::string> negatives;
    ContrastiveProvenance provenance;
    bool operator==(const ContrastiveRecord&) const = default;
};

// Runs evaluation-set construction over the training split at the supplied
// threshold, then uniformly samples round(ratio * |train|) counterfactuals
// without replacement. Returns everything (and sets truncated) when fewer
// are available.
struct AugmentationResult {
    std::vector<CounterfactualSample> samples;
    std::vector<ReasonEntry> reasons;
    std::size_t requested = 0;
    bool truncated = false;
};
AugmentationResult build_augmentation_set(const std::vector<Sample>& train_set,
                                          const CandidatePool& pool,
                                          const LikelihoodScorer& scorer,
                                          const AugmentationConfig& config,
                                          const EntityRecognizer& ner, const Tokenizer& tokenizer,
                                          int workers = 1);

// Applies the entity replacement behind one counterfactual to a contrastive
// record: the document plus every positive and negative summary. Texts that
// do not contain the original surface pass through unchanged; per-text
// replacement problems are reported in `warnings` rather than thrown.
ContrastiveRecord map_contrastive_pairs(const ContrastiveRecord& record,
                                        const std::string& original_surface,
                                        const std::string& counterfactual_surface,
                                        std::size_t min_word_len = 2,
                                        std::vector<std::string>* warnings = nullptr);

// Builds up to k negative summaries by replacing the mention in the summary
// with k distinct counterfactual entities drawn from the configured group.
// Returns fewer when the group runs out.
std::vector<std::string> synthesize_negatives(const std::string& summary,
                                              const EntityMention& mention,
                                              const CandidatePool& pool, const GroupSpec& spec,
                                              const LikelihoodScorer& scorer,
                                              const std::string& document, std::size_t k,
                                              SplitMix64& rng, const Tokenizer& tokenizer,
                                              std::size_t min_word_len = 2);

// Data-filtering baseline: drops samples whose summary mentions a
// non-excluded entity that never occurs (word-bounded) in the document.
struct FilterResult {
    std::vector<Sample> kept;
    std::vector<std::pair<Sample, std::vector<RawMention>>> dropped;
};
FilterResult filter_dataset(const std::vector<Sample>& dataset, const EntityRecognizer& ner,
                            const std::set<std::string>& excluded_categories);

}  // namespace factadapt
