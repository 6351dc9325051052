#pragma once

#include <string>
#include <string_view>

namespace wikilink {

// Display form of a page title: surrounding whitespace trimmed, underscores
// turned into spaces, internal whitespace runs collapsed to one space.
std::string normalize_title(std::string_view raw);

// Lookup key: the display form with an ASCII first character lower-cased.
// Two titles name the same concept iff their keys are equal.
std::string title_key(std::string_view raw);

// Fallback key: the display form with every ASCII letter lower-cased.
std::string folded_title_key(std::string_view raw);

// Text before the first colon, or empty when the title has none.
std::string_view namespace_prefix(std::string_view title);

// ASCII-only lower-casing; bytes >= 0x80 pass through untouched.
std::string ascii_lower(std::string_view text);

bool iequals_ascii(std::string_view a, std::string_view b);
bool istarts_with_ascii(std::string_view text, std::string_view prefix);

std::string_view trim(std::string_view text);

} // namespace wikilink
