#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "factadapt/codec.hpp"

namespace factadapt {

// Provenance sidecar written next to every CLI output. Identifies an
// evaluation set by the (scorer, dataset, group, scenario) tuple and pins
// input fingerprints so downstream runs can verify what they consume.
struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::map<std::string, std::string> input_fingerprints;  // path -> fnv1a64 hex
    std::string scorer_id;
    std::string dataset;
    std::string group;
    std::string scenario;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> outputs;
    std::string started_at;
    std::string finished_at;
};

Json to_json(const RunManifest& manifest);

std::string iso8601_utc_now();

// Writes via a temp file and renames, so a manifest is either absent or
// complete; outputs count as valid only once their manifest exists.
void write_manifest_atomic(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace factadapt
