#include "factadapt/construction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "factadapt/hash.hpp"
#include "factadapt/parallel.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

std::vector<EntityMention> extract_original_candidates(
    const Sample& sample, const EntityRecognizer& ner,
    const std::set<std::string>& excluded_categories, const Tokenizer& tokenizer) {
    // Merge recognizer hits by (surface, category); first appearance in the
    // summary fixes the order.
    std::vector<EntityMention> merged;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& hit : ner.extract(sample.summary)) {
        if (excluded_categories.count(hit.category) > 0) continue;
        const auto key = std::make_pair(hit.surface, hit.category);
        auto it = index.find(key);
        if (it == index.end()) {
            EntityMention mention;
            mention.surface = hit.surface;
            mention.category = hit.category;
            mention.summary_spans = {hit.span};
            index.emplace(key, merged.size());
            merged.push_back(std::move(mention));
        } else {
            merged[it->second].summary_spans.push_back(hit.span);
        }
    }
    std::vector<EntityMention> out;
    for (auto& mention : merged) {
        const auto doc_hits = find_word_bounded(sample.document, mention.surface);
        if (doc_hits.empty()) continue;  // must exist in both fields
        for (const auto pos : doc_hits) {
            mention.doc_spans.push_back({pos, pos + mention.surface.size()});
        }
        mention.first_token_pos =
            tokenizer.char_to_token(sample.summary, mention.summary_spans.front().begin);
        out.push_back(std::move(mention));
    }
    return out;
}

GroupPartition partition_ranks(std::size_t n, const GroupBoundaries& boundaries) {
    check(boundaries);
    GroupPartition part;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        const double r = static_cast<double>(rank) / static_cast<double>(n);
        if (r <= boundaries.exclude_top) continue;
        if (r <= boundaries.top_end) {
            part.top.push_back(rank - 1);
        } else if (r <= boundaries.mid_end) {
            part.mid.push_back(rank - 1);
        } else {
            part.bot.push_back(rank - 1);
        }
    }
    return part;
}

std::vector<std::string> rank_and_group(const std::vector<PoolEntry>& candidates,
                                        const LikelihoodScorer& scorer, const std::string& document,
                                        std::span<const std::string> summary_prefix,
                                        const GroupSpec& spec, SplitMix64& rng, std::size_t k,
                                        const Tokenizer& tokenizer) {
    if (candidates.empty()) throw EmptyGroup("no candidates to rank");
    struct Scored {
        double likelihood;
        const PoolEntry* entry;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    for (const auto& entry : candidates) {
        const double p = scorer.first_token_likelihood(document, summary_prefix,
                                                       first_token(entry.surface, tokenizer));
        scored.push_back({p, &entry});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.likelihood != b.likelihood) return a.likelihood > b.likelihood;
        if (a.entry->frequency != b.entry->frequency) return a.entry->frequency > b.entry->frequency;
        return a.entry->surface < b.entry->surface;
    });

    const auto part = partition_ranks(scored.size(), spec.boundaries);
    const std::vector<std::size_t>* bucket = nullptr;
    switch (spec.group) {
        case Group::Top: bucket = &part.top; break;
        case Group::Mid: bucket = &part.mid; break;
        case Group::Bot: bucket = &part.bot; break;
    }
    if (bucket == nullptr || bucket->empty()) {
        throw EmptyGroup("group " + to_string(spec.group) + " is empty for " +
                         std::to_string(scored.size()) + " candidates");
    }
    std::vector<std::string> surfaces;
    surfaces.reserve(bucket->size());
    for (const auto idx : *bucket) surfaces.push_back(scored[idx].entry->surface);
    return rng.sample_without_replacement(std::move(surfaces), k);
}

namespace {

std::span<const std::string> prefix_of(std::span<const std::string> tokens, std::size_t t) {
    return tokens.subspan(0, std::min(t, tokens.size()));
}

}  // namespace

ValidationOutcome validate_s1(const EntityMention& mention,
                              std::span<const std::string> summary_tokens,
                              const LikelihoodScorer& scorer, const ValidationConfig& config,
                              const Tokenizer& tokenizer) {
    const double p = scorer.first_token_likelihood(
        config.null_document, prefix_of(summary_tokens, mention.first_token_pos),
        first_token(mention.surface, tokenizer));
    return {p > config.threshold, p};
}

std::string mask_entity_spans(const std::string& text, const std::vector<CharSpan>& spans,
                              const std::string& mask_token) {
    auto sorted = spans;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    for (const auto& span : sorted) {
        if (span.begin < pos || span.end > text.size() || span.begin > span.end) {
            throw Error("entity spans must be non-overlapping and within bounds");
        }
        out.append(text, pos, span.begin - pos);
        out += mask_token;
        pos = span.end;
    }
    out.append(text, pos, text.size() - pos);
    return out;
}

ValidationOutcome validate_s1_masked(const EntityMention& mention,
                                     std::span<const std::string> summary_tokens,
                                     const std::string& masked_summary,
                                     const LikelihoodScorer& scorer, const ValidationConfig& config,
                                     const Tokenizer& tokenizer) {
    const double p = scorer.first_token_likelihood(
        masked_summary, prefix_of(summary_tokens, mention.first_token_pos),
        first_token(mention.surface, tokenizer));
    return {p > config.threshold, p};
}

S2Outcome validate_s2(const Sample& original, const EntityMention& mention,
                      const std::string& candidate_surface, const LikelihoodScorer& scorer,
                      const ValidationConfig& config, const Tokenizer& tokenizer,
                      std::size_t min_word_len) {
    S2Outcome outcome;
    outcome.counterfactual =
        apply_replacement(original, mention, candidate_surface, tokenizer, min_word_len);
    const auto tokens_original = tokenizer.tokenize(original.summary);
    const auto tokens_counterfactual = tokenizer.tokenize(outcome.counterfactual.summary);
    const double p_original = scorer.first_token_likelihood(
        original.document, prefix_of(tokens_original, mention.first_token_pos),
        first_token(mention.surface, tokenizer));
    const double p_counterfactual = scorer.first_token_likelihood(
        outcome.counterfactual.document,
        prefix_of(tokens_counterfactual, outcome.counterfactual.first_token_pos),
        first_token(candidate_surface, tokenizer));
    outcome.score = p_original - p_counterfactual;
    outcome.accepted = outcome.score > config.threshold;
    return outcome;
}

namespace {

EvalSetResult build_for_sample(const Sample& sample, const CandidatePool& pool,
                               const LikelihoodScorer& scorer, const EvalSetOptions& options,
                               const EntityRecognizer& ner, const Tokenizer& tokenizer) {
    EvalSetResult result;
    const std::uint64_t sample_seed = derive_seed(options.seed, sample.id);
    SplitMix64 rng(sample_seed);

    const auto mentions =
        extract_original_candidates(sample, ner, options.excluded_categories, tokenizer);
    if (mentions.empty()) {
        result.reasons.push_back({sample.id, "extract", "NO_ENTITY"});
        return result;
    }
    const auto summary_tokens = tokenizer.tokenize(sample.summary);

    std::optional<std::string> masked_summary;
    if (options.validation.scenario == Scenario::S1Masked) {
        std::vector<CharSpan> spans;
        for (const auto& hit : ner.extract(sample.summary)) spans.push_back(hit.span);
        masked_summary = mask_entity_spans(sample.summary, spans, options.validation.mask_token);
    }

    auto emit = [&](const EntityMention& mention, const std::string& counterfactual,
                    const ReplacementResult& replaced, double score) {
        CounterfactualSample cf;
        cf.source_id = sample.id;
        cf.document = replaced.document;
        cf.summary = replaced.summary;
        cf.original_entity = mention;
        cf.counterfactual_surface = counterfactual;
        cf.counterfactual_first_token_pos = replaced.first_token_pos;
        cf.group = options.group.group;
        cf.scenario = options.validation.scenario;
        cf.validation_score = score;
        cf.rng_seed = sample_seed;
        check_counterfactual(cf);
        result.samples.push_back(std::move(cf));
    };

    int emitted = 0;
    const auto capped = [&] {
        return options.max_per_sample >= 0 && emitted >= options.max_per_sample;
    };

    for (const auto& mention : mentions) {
        if (capped()) break;

        std::vector<std::string> draws;
        try {
            const auto candidates = eligible_candidates(pool, mention.category, mention.surface);
            if (candidates.empty()) throw EmptyGroup("only the original entity in its bucket");
            draws = rank_and_group(candidates, scorer, sample.document,
                                   prefix_of(summary_tokens, mention.first_token_pos),
                                   options.group, rng, options.fan_out, tokenizer);
        } catch (const UnknownCategory&) {
            result.reasons.push_back({sample.id, "group", "EMPTY_GROUP"});
            continue;
        } catch (const EmptyGroup&) {
            result.reasons.push_back({sample.id, "group", "EMPTY_GROUP"});
            continue;
        }
        if (draws.size() < options.fan_out) ++result.short_draws;

        if (options.validation.scenario == Scenario::S2) {
            for (const auto& candidate : draws) {
                if (capped()) break;
                try {
                    const auto outcome = validate_s2(sample, mention, candidate, scorer,
                                                     options.validation, tokenizer,
                                                     options.min_word_len);
                    if (!outcome.accepted) {
                        result.reasons.push_back({sample.id, "validate", "BELOW_THRESHOLD"});
                        continue;
                    }
                    emit(mention, candidate, outcome.counterfactual, outcome.score);
                    ++emitted;
                } catch (const Error&) {
                    result.reasons.push_back({sample.id, "replace", "REPLACEMENT_ERROR"});
                }
            }
        } else {
            const auto outcome =
                options.validation.scenario == Scenario::S1
                    ? validate_s1(mention, summary_tokens, scorer, options.validation, tokenizer)
                    : validate_s1_masked(mention, summary_tokens, *masked_summary, scorer,
                                         options.validation, tokenizer);
            if (!outcome.accepted) {
                result.reasons.push_back({sample.id, "validate", "BELOW_THRESHOLD"});
                continue;
            }
            for (const auto& candidate : draws) {
                if (capped()) break;
                try {
                    const auto replaced = apply_replacement(sample, mention, candidate, tokenizer,
                                                            options.min_word_len);
                    emit(mention, candidate, replaced, outcome.score);
                    ++emitted;
                } catch (const Error&) {
                    result.reasons.push_back({sample.id, "replace", "REPLACEMENT_ERROR"});
                }
            }
        }
    }
    return result;
}

}  // namespace

EvalSetResult build_eval_set(const std::vector<Sample>& dataset, const CandidatePool& pool,
                             const LikelihoodScorer& scorer, const EvalSetOptions& options,
                             const EntityRecognizer& ner, const Tokenizer& tokenizer) {
    check(options.validation);
    check(options.group.boundaries);

    const LikelihoodScorer* effective = &scorer;
    std::optional<SerializedScorer> serialized;
    if (options.workers > 1 && !scorer.thread_safe()) {
        serialized.emplace(scorer);
        effective = &*serialized;
    }

    std::vector<EvalSetResult> per_sample(dataset.size());
    parallel_for(dataset.size(), options.workers, [&](std::size_t i) {
        per_sample[i] = build_for_sample(dataset[i], pool, *effective, options, ner, tokenizer);
    });

    EvalSetResult merged;
    for (auto& part : per_sample) {
        std::move(part.samples.begin(), part.samples.end(), std::back_inserter(merged.samples));
        std::move(part.reasons.begin(), part.reasons.end(), std::back_inserter(merged.reasons));
        merged.short_draws += part.short_draws;
    }
    return merged;
}

double search_threshold(const std::vector<Sample>& validation_set, const CandidatePool& pool,
                        const LikelihoodScorer& scorer, const EvalSetOptions& options,
                        const ThresholdSearch& search, const EntityRecognizer& ner,
                        const Tokenizer& tokenizer) {
    if (validation_set.empty()) throw EmptyCorpus();
    if (!(search.target_fraction > 0.0 && search.target_fraction <= 1.0)) {
        throw ConfigError("target fraction must lie in (0,1]");
    }
    if (search.grid_step <= 0.0) throw ConfigError("grid step must be positive");

    const double lo = options.validation.scenario == Scenario::S2 ? -1.0 : 0.0;
    const double hi = 1.0;
    const auto points = static_cast<std::size_t>(std::llround((hi - lo) / search.grid_step));
    const auto tau_at = [&](std::size_t i) { return lo + static_cast<double>(i) * search.grid_step; };

    const auto fraction_at = [&](std::size_t i) {
        EvalSetOptions probe = options;
        probe.validation.threshold = tau_at(i);
        const auto built = build_eval_set(validation_set, pool, scorer, probe, ner, tokenizer);
        return static_cast<double>(built.samples.size()) /
               static_cast<double>(validation_set.size());
    };
    const double floor_fraction = search.target_fraction - search.tolerance;
    const auto admissible = [&](std::size_t i) { return fraction_at(i) >= floor_fraction; };

    if (!admissible(0)) {
        throw ThresholdUnreachable("extraction fraction below target even at threshold " +
                                   std::to_string(tau_at(0)));
    }
    // Fraction is non-increasing in the threshold, so admissibility is a
    // prefix of the grid; bisect for its last index.
    std::size_t lo_i = 0;
    std::size_t hi_i = points;
    while (lo_i < hi_i) {
        const std::size_t mid = lo_i + (hi_i - lo_i + 1) / 2;
        if (admissible(mid)) {
            lo_i = mid;
        } else {
            hi_i = mid - 1;
        }
    }
    return tau_at(lo_i);
}

}  // namespace factadapt
