#include "factadapt/augmentation.hpp"

#include <algorithm>
#include <cmath>

#include "factadapt/hash.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

void check(const AugmentationConfig& config) {
    if (!(config.ratio > 0.0 && config.ratio <= 1.0)) {
        throw ConfigError("augmentation ratio must lie in (0,1]");
    }
    if (config.negatives_per_sample < 1) {
        throw ConfigError("negatives_per_sample must be >= 1");
    }
}

AugmentationResult build_augmentation_set(const std::vector<Sample>& train_set,
                                          const CandidatePool& pool,
                                          const LikelihoodScorer& scorer,
                                          const AugmentationConfig& config,
                                          const EntityRecognizer& ner, const Tokenizer& tokenizer,
                                          int workers) {
    check(config);
    EvalSetOptions options;
    options.validation.scenario = config.scenario;
    options.validation.threshold = config.threshold;
    options.group.group = config.group;
    options.seed = config.seed;
    options.workers = workers;

    auto built = build_eval_set(train_set, pool, scorer, options, ner, tokenizer);

    AugmentationResult result;
    result.reasons = std::move(built.reasons);
    result.requested = static_cast<std::size_t>(
        std::llround(config.ratio * static_cast<double>(train_set.size())));
    if (built.samples.size() <= result.requested) {
        result.truncated = built.samples.size() < result.requested;
        result.samples = std::move(built.samples);
        return result;
    }
    SplitMix64 rng(derive_seed(config.seed, "augmentation-sampling"));
    result.samples = rng.sample_without_replacement(std::move(built.samples), result.requested);
    return result;
}

ContrastiveRecord map_contrastive_pairs(const ContrastiveRecord& record,
                                        const std::string& original_surface,
                                        const std::string& counterfactual_surface,
                                        std::size_t min_word_len,
                                        std::vector<std::string>* warnings) {
    if (record.document.find(original_surface) == std::string::npos) {
        throw EntityNotFound("\"" + original_surface + "\" not found in contrastive document");
    }
    auto map_text = [&](const std::string& text, const char* role) {
        if (text.find(original_surface) == std::string::npos) return text;
        try {
            return replace_entity_text(text, original_surface, counterfactual_surface, min_word_len);
        } catch (const Error& e) {
            if (warnings != nullptr) {
                warnings->push_back(std::string(role) + ": " + e.what());
            }
            return text;
        }
    };
    ContrastiveRecord mapped;
    mapped.document =
        replace_entity_text(record.document, original_surface, counterfactual_surface, min_word_len);
    for (const auto& positive : record.positives) {
        mapped.positives.push_back(map_text(positive, "positive"));
    }
    for (const auto& negative : record.negatives) {
        mapped.negatives.push_back(map_text(negative, "negative"));
    }
    mapped.provenance = record.provenance;
    mapped.provenance.original_surface = original_surface;
    mapped.provenance.counterfactual_surfaces = {counterfactual_surface};
    return mapped;
}

std::vector<std::string> synthesize_negatives(const std::string& summary,
                                              const EntityMention& mention,
                                              const CandidatePool& pool, const GroupSpec& spec,
                                              const LikelihoodScorer& scorer,
                                              const std::string& document, std::size_t k,
                                              SplitMix64& rng, const Tokenizer& tokenizer,
                                              std::size_t min_word_len) {
    if (k < 1) return {};
    const auto candidates = eligible_candidates(pool, mention.category, mention.surface);
    if (candidates.empty()) throw EmptyGroup("only the original entity in its bucket");
    const auto summary_tokens = tokenizer.tokenize(summary);
    const std::span<const std::string> prefix(
        summary_tokens.data(), std::min(mention.first_token_pos, summary_tokens.size()));
    const auto draws =
        rank_and_group(candidates, scorer, document, prefix, spec, rng, k, tokenizer);
    std::vector<std::string> negatives;
    negatives.reserve(draws.size());
    for (const auto& candidate : draws) {
        negatives.push_back(replace_entity_text(summary, mention.surface, candidate, min_word_len));
    }
    return negatives;
}

FilterResult filter_dataset(const std::vector<Sample>& dataset, const EntityRecognizer& ner,
                            const std::set<std::string>& excluded_categories) {
    FilterResult result;
    for (const auto& sample : dataset) {
        std::vector<RawMention> offending;
        for (const auto& mention : ner.extract(sample.summary)) {
            if (excluded_categories.count(mention.category) > 0) continue;
            if (!contains_word_bounded(sample.document, mention.surface)) {
                offending.push_back(mention);
            }
        }
        if (offending.empty()) {
            result.kept.push_back(sample);
        } else {
            result.dropped.emplace_back(sample, std::move(offending));
        }
    }
    return result;
}

}  // namespace factadapt
