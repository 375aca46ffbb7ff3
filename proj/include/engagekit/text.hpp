#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace engagekit {

// Byte offset of the first invalid UTF-8 sequence, or nullopt if valid.
std::optional<std::size_t> utf8_invalid_at(std::string_view bytes);

// True for Unicode whitespace code points (ASCII space/tab/newlines, NEL,
// NBSP, the general-punctuation spaces, line/paragraph separators, etc.).
bool is_unicode_space(char32_t cp);

// Number of maximal runs of non-whitespace characters. Unicode whitespace
// separates words; punctuation attached to a word does not split it.
int word_count(std::string_view text);

// Strip leading/trailing Unicode whitespace.
std::string_view trim(std::string_view text);

// Lowercased (ASCII) tokens with non-alphanumeric characters stripped from
// token edges. Interior punctuation is kept, so "type-1?" tokenizes to
// "type-1" and "(VMs)" to "vms". Tokens that are all punctuation vanish.
std::vector<std::string> tokenize_lower(std::string_view text);

// Occurrences of `phrase` (itself tokenized) as a contiguous token run.
int count_token_seq(const std::vector<std::string>& tokens, std::string_view phrase);

bool contains_token_seq(const std::vector<std::string>& tokens, std::string_view phrase);

std::string to_lower(std::string_view text);

// Shortest decimal representation that parses back to exactly `v`.
std::string format_double(double v);

// Fixed two-decimal rendering used by report documents.
std::string format_fixed2(double v);

// Seconds since the UTC epoch -> "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(std::int64_t epoch_seconds);

// Prefix of `text` covering at most `max_words` words (cut at a word
// boundary, so the result is always a substring of `text`).
std::string_view truncate_words(std::string_view text, int max_words);

std::string html_escape(std::string_view text);

}  // namespace engagekit
