#pragma once

#include <string>
#include <utility>
#include <vector>

#include "factadapt/adapters.hpp"
#include "factadapt/types.hpp"

namespace factadapt {

// Positional word pairing between an original and a replacement entity.
// Splitting both on whitespace into w_0..w_{m-1} and v_0..v_{n-1}, word i
// pairs with v_{floor(i*n/m)}; pairs whose sides are equal are dropped.
// Throws EmptyEntity when either side has no words.
std::vector<std::pair<std::string, std::string>> word_map(const std::string& original,
                                                          const std::string& counterfactual);

// Words of the original entity that replacement actively rewrites: mapped,
// at least min_word_len long, and not also a word of the replacement entity.
std::vector<std::string> replaced_words(const std::string& original,
                                        const std::string& counterfactual,
                                        std::size_t min_word_len = 2);

// Full substitution on one text: every occurrence of the original surface
// becomes the counterfactual surface, then standalone (word-bounded) mapped
// words are rewritten. Words shorter than min_word_len or shared with the
// counterfactual surface are left alone, as is anything inside an occurrence
// of the counterfactual surface. Applying the same substitution again is a
// no-op. Throws DegenerateReplacement when the counterfactual contains the
// original as a substring.
std::string replace_entity_text(const std::string& text, const std::string& original,
                                const std::string& counterfactual, std::size_t min_word_len = 2);

struct ReplacementResult {
    std::string document;
    std::string summary;
    std::size_t first_token_pos = 0;  // of the counterfactual surface in summary
};

// Applies replace_entity_text to both fields and locates the counterfactual
// surface's first token in the new summary. Throws EntityNotFound when the
// original surface is absent from either field.
ReplacementResult apply_replacement(const Sample& sample, const EntityMention& entity,
                                    const std::string& counterfactual_surface,
                                    const Tokenizer& tokenizer, std::size_t min_word_len = 2);

// Token index of the earliest word-bounded occurrence of the surface.
// Throws EntityNotFound when there is none.
std::size_t locate_first_token(const std::string& summary, const std::string& entity_surface,
                               const Tokenizer& tokenizer);

}  // namespace factadapt
