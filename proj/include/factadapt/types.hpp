#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factadapt/errors.hpp"

namespace factadapt {

enum class Split { Train, Validation, Test };
enum class Group { Top, Mid, Bot };
enum class Scenario { S1, S1Masked, S2 };

std::string to_string(Split s);
std::string to_string(Group g);
std::string to_string(Scenario s);
Split split_from_string(const std::string& s);
Group group_from_string(const std::string& s);
Scenario scenario_from_string(const std::string& s);

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    auto operator<=>(const CharSpan&) const = default;
};

// A document/summary pair as ingested from a dataset.
struct Sample {
    std::string id;
    std::string document;
    std::string summary;
    Split split = Split::Train;
    bool operator==(const Sample&) const = default;
};

// A named entity present in both fields of a sample. first_token_pos is the
// 0-based index of the token containing the start of the earliest summary span.
struct EntityMention {
    std::string surface;
    std::string category;
    std::vector<CharSpan> doc_spans;
    std::vector<CharSpan> summary_spans;
    std::size_t first_token_pos = 0;
    bool operator==(const EntityMention&) const = default;
};

struct PoolEntry {
    std::string surface;
    std::uint64_t frequency = 1;
    bool operator==(const PoolEntry&) const = default;
};

// Replacement-entity inventory keyed by entity category. Surfaces are unique
// (case-sensitive) within a category.
struct CandidatePool {
    std::map<std::string, std::vector<PoolEntry>> by_category;
    bool operator==(const CandidatePool&) const = default;
};

// Rank-fraction boundaries for candidate grouping. Candidates ranked by
// likelihood fall into Top (exclude_top, top_end], Mid (top_end, mid_end],
// Bot (mid_end, 1]; ranks at or above exclude_top are never eligible.
struct GroupBoundaries {
    double exclude_top = 0.02;
    double top_end = 0.25;
    double mid_end = 0.75;
    bool operator==(const GroupBoundaries&) const = default;
};

struct GroupSpec {
    GroupBoundaries boundaries;
    Group group = Group::Mid;
    bool operator==(const GroupSpec&) const = default;
};

struct ValidationConfig {
    Scenario scenario = Scenario::S1;
    double threshold = 0.0;
    std::string null_document = ".";
    std::string mask_token = "[MASK]";
    bool operator==(const ValidationConfig&) const = default;
};

// One perturbed sample plus full provenance of how it was made.
struct CounterfactualSample {
    std::string source_id;
    std::string document;
    std::string summary;
    EntityMention original_entity;
    std::string counterfactual_surface;
    std::size_t counterfactual_first_token_pos = 0;
    Group group = Group::Mid;
    Scenario scenario = Scenario::S1;
    double validation_score = 0.0;
    std::uint64_t rng_seed = 0;
    bool operator==(const CounterfactualSample&) const = default;
};

struct PerSampleMetrics {
    std::string source_id;
    std::optional<double> m_cl;
    std::optional<double> m_fc;
    std::optional<bool> replaced;
    bool operator==(const PerSampleMetrics&) const = default;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1); 0 when n < 2
    std::size_t n = 0;
    bool operator==(const MetricAggregate&) const = default;
};

struct ReportMetadata {
    std::string dataset;
    std::string scorer_id;
    std::string scenario;
    std::string group;
    std::vector<std::uint64_t> seeds;
    bool operator==(const ReportMetadata&) const = default;
};

struct MetricsReport {
    std::vector<PerSampleMetrics> per_sample;
    std::map<std::string, MetricAggregate> aggregate;
    ReportMetadata metadata;
    bool operator==(const MetricsReport&) const = default;
};

// Invariant checks. Each throws a factadapt::Error subclass on violation.
void check(const GroupBoundaries& b);
void check(const ValidationConfig& c);
void check_sample(const Sample& s);

// Checks the counterfactual-sample invariants: no word-bounded occurrence of
// the original surface in either field and at least one word-bounded
// occurrence of the counterfactual surface in the summary.
void check_counterfactual(const CounterfactualSample& cf);

// True when two reports describe the same run apart from their seed sets.
bool same_run_metadata(const ReportMetadata& a, const ReportMetadata& b);

}  // namespace factadapt
