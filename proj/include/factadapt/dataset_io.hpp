#pragma once

#include <filesystem>
#include <vector>

#include "factadapt/augmentation.hpp"
#include "factadapt/codec.hpp"
#include "factadapt/construction.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// JSONL dataset ingestion: one {"id","document","summary","split"?} object
// per line. Errors carry the offending line number; duplicate ids report
// every line involved.
std::vector<Sample> ingest_dataset(const std::filesystem::path& path);

void write_samples_jsonl(const std::vector<Sample>& samples, const std::filesystem::path& path);

std::vector<CounterfactualSample> read_counterfactuals_jsonl(const std::filesystem::path& path);
void write_counterfactuals_jsonl(const std::vector<CounterfactualSample>& samples,
                                 const std::filesystem::path& path);

std::vector<ContrastiveRecord> read_contrastive_jsonl(const std::filesystem::path& path);
void write_contrastive_jsonl(const std::vector<ContrastiveRecord>& records,
                             const std::filesystem::path& path);

void write_reason_log_jsonl(const std::vector<ReasonEntry>& reasons,
                            const std::filesystem::path& path);

Json contrastive_to_json(const ContrastiveRecord& record);
ContrastiveRecord contrastive_from_json(const Json& j);

// FNV-1a fingerprint of a file's exact bytes, as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace factadapt
