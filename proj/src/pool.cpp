#include "factadapt/pool.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "factadapt/codec.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

const std::set<std::string>& default_excluded_categories() {
    static const std::set<std::string> categories{"QUANTITY", "DATE",    "TIME",  "CARDINAL",
                                                  "ORDINAL",  "PERCENT", "MONEY"};
    return categories;
}

PoolFields pool_fields_from_string(const std::string& s) {
    if (s == "doc" || s == "document") return PoolFields::Document;
    if (s == "summary") return PoolFields::Summary;
    if (s == "both") return PoolFields::Both;
    throw ConfigError("unknown pool fields: " + s + " (expected doc|summary|both)");
}

std::string to_string(PoolFields f) {
    switch (f) {
        case PoolFields::Document: return "doc";
        case PoolFields::Summary: return "summary";
        case PoolFields::Both: return "both";
    }
    return "both";
}

CandidatePool build_pool(const std::vector<Sample>& corpus, const EntityRecognizer& ner,
                         const std::set<std::string>& excluded_categories, PoolFields fields,
                         std::uint64_t min_frequency) {
    if (corpus.empty()) throw EmptyCorpus();
    // map keeps categories and surfaces ordered, so pool output is canonical.
    std::map<std::string, std::map<std::string, std::uint64_t>> counts;
    auto tally = [&](const std::string& text) {
        for (const auto& mention : ner.extract(text)) {
            if (excluded_categories.count(mention.category) > 0) continue;
            counts[mention.category][mention.surface] += 1;
        }
    };
    for (const auto& sample : corpus) {
        if (fields != PoolFields::Summary) tally(sample.document);
        if (fields != PoolFields::Document) tally(sample.summary);
    }
    CandidatePool pool;
    for (const auto& [category, surfaces] : counts) {
        auto& bucket = pool.by_category[category];
        for (const auto& [surface, frequency] : surfaces) {
            if (frequency >= min_frequency) bucket.push_back({surface, frequency});
        }
        if (bucket.empty()) pool.by_category.erase(category);
    }
    return pool;
}

std::vector<PoolEntry> eligible_candidates(const CandidatePool& pool, const std::string& category,
                                           const std::string& exclude_surface) {
    auto it = pool.by_category.find(category);
    if (it == pool.by_category.end() || it->second.empty()) throw UnknownCategory(category);
    std::vector<PoolEntry> out;
    out.reserve(it->second.size());
    for (const auto& entry : it->second) {
        if (entry.surface != exclude_surface) out.push_back(entry);
    }
    return out;
}

void save_pool_jsonl(const CandidatePool& pool, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& [category, entries] : pool.by_category) {
        auto sorted = entries;
        std::sort(sorted.begin(), sorted.end(),
                  [](const PoolEntry& a, const PoolEntry& b) { return a.surface < b.surface; });
        for (const auto& entry : sorted) {
            out << to_json(entry, category).dump() << '\n';
        }
    }
}

CandidatePool load_pool_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    CandidatePool pool;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!j.contains("surface") || !j.contains("category")) {
            throw MissingField("surface/category", line_no);
        }
        const std::uint64_t freq = j.value("frequency", std::uint64_t{1});
        if (freq < 1) throw ParseError(line_no, "frequency must be >= 1");
        pool.by_category[j.at("category").get<std::string>()].push_back(
            {j.at("surface").get<std::string>(), freq});
    }
    return pool;
}

}  // namespace factadapt
