#include "factadapt/replacement.hpp"

#include <unordered_map>
#include <unordered_set>

#include "factadapt/text.hpp"

namespace factadapt {

std::vector<std::pair<std::string, std::string>> word_map(const std::string& original,
                                                          const std::string& counterfactual) {
    const auto from = split_whitespace(original);
    const auto to = split_whitespace(counterfactual);
    if (from.empty() || to.empty()) throw EmptyEntity();
    std::vector<std::pair<std::string, std::string>> pairs;
    const std::size_t m = from.size();
    const std::size_t n = to.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::string& target = to[i * n / m];
        if (from[i] != target) pairs.emplace_back(from[i], target);
    }
    return pairs;
}

std::vector<std::string> replaced_words(const std::string& original,
                                        const std::string& counterfactual,
                                        std::size_t min_word_len) {
    const auto to = split_whitespace(counterfactual);
    const std::unordered_set<std::string> counterfactual_words(to.begin(), to.end());
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& [word, _] : word_map(original, counterfactual)) {
        if (word.size() < min_word_len) continue;
        if (counterfactual_words.count(word) > 0) continue;
        if (seen.insert(word).second) out.push_back(word);
    }
    return out;
}

std::string replace_entity_text(const std::string& text, const std::string& original,
                                const std::string& counterfactual, std::size_t min_word_len) {
    if (original.empty() || counterfactual.empty()) throw EmptyEntity();
    if (counterfactual.find(original) != std::string::npos) {
        throw DegenerateReplacement(original, counterfactual);
    }

    const std::string full = replace_all(text, original, counterfactual);

    // First matching pair wins when the original repeats a word. Words the
    // two surfaces share are left alone: rewriting them would oscillate on
    // repeated application.
    const auto counterfactual_words = split_whitespace(counterfactual);
    const std::unordered_set<std::string> keep(counterfactual_words.begin(),
                                               counterfactual_words.end());
    std::unordered_map<std::string, std::string> table;
    for (const auto& [word, target] : word_map(original, counterfactual)) {
        if (word.size() < min_word_len) continue;
        if (keep.count(word) > 0) continue;
        table.emplace(word, target);
    }
    if (table.empty()) return full;

    // Occurrences of the counterfactual surface are off limits for the
    // word-level pass; this covers the spans just inserted above and keeps
    // the whole operation idempotent.
    const auto protected_starts = find_all(full, counterfactual);
    const std::size_t protected_len = counterfactual.size();

    std::string out;
    out.reserve(full.size());
    std::size_t i = 0;
    std::size_t p = 0;
    while (i < full.size()) {
        if (!is_word_char(full[i])) {
            out += full[i];
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < full.size() && is_word_char(full[j])) ++j;
        while (p < protected_starts.size() && protected_starts[p] + protected_len <= i) ++p;
        const bool in_protected = p < protected_starts.size() && protected_starts[p] < j;
        if (!in_protected) {
            auto it = table.find(full.substr(i, j - i));
            if (it != table.end()) {
                out += it->second;
                i = j;
                continue;
            }
        }
        out.append(full, i, j - i);
        i = j;
    }
    return out;
}

std::size_t locate_first_token(const std::string& summary, const std::string& entity_surface,
                               const Tokenizer& tokenizer) {
    const auto hits = find_word_bounded(summary, entity_surface);
    if (hits.empty()) {
        throw EntityNotFound("\"" + entity_surface + "\" not found in summary");
    }
    return tokenizer.char_to_token(summary, hits.front());
}

ReplacementResult apply_replacement(const Sample& sample, const EntityMention& entity,
                                    const std::string& counterfactual_surface,
                                    const Tokenizer& tokenizer, std::size_t min_word_len) {
    if (sample.document.find(entity.surface) == std::string::npos) {
        throw EntityNotFound("\"" + entity.surface + "\" not found in document");
    }
    if (sample.summary.find(entity.surface) == std::string::npos) {
        throw EntityNotFound("\"" + entity.surface + "\" not found in summary");
    }
    ReplacementResult result;
    result.document =
        replace_entity_text(sample.document, entity.surface, counterfactual_surface, min_word_len);
    result.summary =
        replace_entity_text(sample.summary, entity.surface, counterfactual_surface, min_word_len);
    result.first_token_pos = locate_first_token(result.summary, counterfactual_surface, tokenizer);
    return result;
}

}  // namespace factadapt
