#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace satbot::text {

/// Canonical matching form shared by the intent router and the sentiment
/// scorer: lowercase, NFC, combining marks and format characters removed,
/// Arabic letter variants folded to their Persian forms, punctuation turned
/// into spaces, whitespace collapsed and trimmed.
std::string normalize(std::string_view utf8);

/// Word tokens of normalize(utf8), split on Unicode word boundaries.
std::vector<std::string> tokenize(std::string_view utf8);

/// Number of Unicode code points.
std::size_t char_length(std::string_view utf8);

/// Truncates to at most `max_chars` code points without splitting a sequence.
std::string truncate_chars(std::string_view utf8, std::size_t max_chars);

}  // namespace satbot::text
