#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "factadapt/adapters.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// Conditional-likelihood adaptiveness of one counterfactual: the scorer's
// likelihood of the original entity's first token in the original context
// minus that of the counterfactual entity's first token in the replaced
// context. Always in [-1, 1]. Throws PositionMismatch when a stored token
// position exceeds its summary.
double m_cl(const LikelihoodScorer& model, const Sample& original, const CounterfactualSample& cf,
            const Tokenizer& tokenizer);

// Factual-consistency adaptiveness: consistency of the summary generated
// from the original document minus consistency of the one generated from the
// counterfactual document. Generator exceptions surface as GeneratorFailure.
double m_fc(const SummaryGenerator& generator, const ConsistencyScorer& consistency,
            const std::string& original_document, const std::string& counterfactual_document);

// Fraction of generated summaries that contain the counterfactual surface
// (word-bounded) and no trace of the original entity. With
// full_surface_only, only the complete original surface counts as a trace;
// otherwise any word the replacement rewrote counts too.
double replacement_rate(
    std::span<const std::pair<CounterfactualSample, std::string>> pairs,
    bool full_surface_only = false, std::size_t min_word_len = 2);

// Sample mean and standard deviation (n-1 denominator; 0 when n < 2).
MetricAggregate aggregate_values(std::span<const double> values);

// Builds a report from per-sample rows, computing the m_cl / m_fc /
// replacement_rate aggregates from whatever fields are present.
MetricsReport make_report(std::vector<PerSampleMetrics> per_sample, ReportMetadata metadata);

// Cross-seed aggregation: one row per input report (keyed "seed:<seeds>"),
// aggregates over the per-seed means. Reports must agree on everything but
// their seed sets; otherwise MetadataMismatch.
MetricsReport aggregate_reports(const std::vector<MetricsReport>& reports);

// Wide CSV: source_id,m_cl,m_fc,replaced with blanks for absent values.
std::string report_to_csv(const MetricsReport& report);

}  // namespace factadapt
