#pragma once

#include <filesystem>
#include <set>

#include "factadapt/adapters.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// Numerical-style entity categories excluded from replacement by default;
// they paraphrase too freely to treat as knowledge conflicts.
const std::set<std::string>& default_excluded_categories();

enum class PoolFields { Document, Summary, Both };

PoolFields pool_fields_from_string(const std::string& s);
std::string to_string(PoolFields f);

// Inventories every non-excluded entity mention in the corpus with its
// mention-level frequency. Throws EmptyCorpus when corpus is empty.
CandidatePool build_pool(const std::vector<Sample>& corpus, const EntityRecognizer& ner,
                         const std::set<std::string>& excluded_categories,
                         PoolFields fields = PoolFields::Both, std::uint64_t min_frequency = 1);

// Same-category entries with the original surface removed. Throws
// UnknownCategory when the category bucket is missing or empty; callers skip
// the sample in that case.
std::vector<PoolEntry> eligible_candidates(const CandidatePool& pool, const std::string& category,
                                           const std::string& exclude_surface);

// JSONL persistence: one {"surface","category","frequency"} object per line,
// sorted by category then surface.
void save_pool_jsonl(const CandidatePool& pool, const std::filesystem::path& path);
CandidatePool load_pool_jsonl(const std::filesystem::path& path);

}  // namespace factadapt
