#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mqsum {

// Number of maximal non-whitespace runs. This is the word definition every
// word-derived number in the project (token estimates, length stats) rests on.
int64_t word_count(std::string_view text);

// Trim plus collapse each whitespace run to a single space.
std::string normalize_ws(std::string_view text);

// Replace invalid UTF-8 sequences (truncated, overlong, surrogates,
// out-of-range) with U+FFFD. Valid input passes through byte-identical.
std::string sanitize_utf8(std::string_view text);

std::vector<std::string_view> split_ws(std::string_view text);

std::string to_lower_ascii(std::string_view text);

} // namespace mqsum
