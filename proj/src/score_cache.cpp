#include "factadapt/score_cache.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

#include "factadapt/hash.hpp"
#include "factadapt/text.hpp"

namespace factadapt {

namespace {

std::uint64_t prefix_hash(std::span<const std::string> prefix) {
    std::uint64_t h = kFnvOffset;
    for (const auto& token : prefix) {
        h = fnv1a64_u64(token.size(), h);
        h = fnv1a64(token, h);
    }
    return h;
}

std::uint64_t parse_hex64(const std::string& s) {
    return std::stoull(s, nullptr, 16);
}

}  // namespace

std::string ScoreCache::key_of(const std::string& scorer_id, const std::string& document,
                               std::span<const std::string> prefix, const std::string& token) {
    return scorer_id + '\x1f' + hex64(fnv1a64(document)) + '\x1f' + hex64(prefix_hash(prefix)) +
           '\x1f' + token;
}

ScoreCache::ScoreCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(file_);
    if (!in) return;  // fresh cache
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::ordered_json::parse(line);
            const std::string key = j.at("scorer").get<std::string>() + '\x1f' +
                                    j.at("doc").get<std::string>() + '\x1f' +
                                    j.at("prefix").get<std::string>() + '\x1f' +
                                    j.at("token").get<std::string>();
            entries_[key] = std::bit_cast<double>(parse_hex64(j.at("bits").get<std::string>()));
        } catch (const std::exception& e) {
            throw ParseError(line_no, std::string("score cache: ") + e.what());
        }
    }
}

std::optional<double> ScoreCache::lookup(const std::string& scorer_id, const std::string& document,
                                         std::span<const std::string> prefix,
                                         const std::string& token) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key_of(scorer_id, document, prefix, token));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::store(const std::string& scorer_id, const std::string& document,
                       std::span<const std::string> prefix, const std::string& token,
                       double probability) {
    std::unique_lock lock(mutex_);
    const auto key = key_of(scorer_id, document, prefix, token);
    if (!entries_.emplace(key, probability).second) return;  // already present
    std::ofstream out(file_, std::ios::app);
    if (!out) throw IoError("cannot append to score cache " + file_.string());
    out << nlohmann::ordered_json{{"scorer", scorer_id},
                                  {"doc", hex64(fnv1a64(document))},
                                  {"prefix", hex64(prefix_hash(prefix))},
                                  {"token", token},
                                  {"bits", hex64(std::bit_cast<std::uint64_t>(probability))}}
               .dump()
        << '\n';
}

std::size_t ScoreCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

double CachedScorer::first_token_likelihood(const std::string& document,
                                            std::span<const std::string> summary_prefix,
                                            const std::string& candidate_first_token) const {
    if (auto hit = cache_.lookup(inner_.id(), document, summary_prefix, candidate_first_token)) {
        return *hit;
    }
    const double p =
        inner_.first_token_likelihood(document, summary_prefix, candidate_first_token);
    cache_.store(inner_.id(), document, summary_prefix, candidate_first_token, p);
    return p;
}

}  // namespace factadapt
