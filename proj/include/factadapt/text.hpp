#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace factadapt {

// Word characters are ASCII alphanumerics plus any byte >= 0x80, so UTF-8
// multibyte letters never introduce spurious boundaries.
bool is_word_char(char c);

std::string trim(std::string_view s);

// Whitespace-delimited words, in order.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Start offsets of non-overlapping occurrences, scanning left to right.
std::vector<std::size_t> find_all(std::string_view text, std::string_view needle);

// Occurrences whose neighbouring characters are not word characters.
std::vector<std::size_t> find_word_bounded(std::string_view text, std::string_view needle);

std::size_t count_word_bounded(std::string_view text, std::string_view needle);
bool contains_word_bounded(std::string_view text, std::string_view needle);

std::string replace_all(std::string_view text, std::string_view needle, std::string_view replacement);

struct TokenSpan {
    std::string token;
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

// Maximal whitespace-delimited runs with their character ranges.
std::vector<TokenSpan> whitespace_token_spans(std::string_view text);

}  // namespace factadapt
