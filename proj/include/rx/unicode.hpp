#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rx::uni {

// Decodes UTF-8 into scalar values. Throws rx::ParseError on malformed
// bytes (overlong forms, surrogates, truncated sequences).
std::vector<char32_t> decode_utf8(const std::string& bytes);

std::string encode_utf8(const std::vector<char32_t>& codepoints);
std::string encode_utf8(char32_t cp);

bool is_valid_utf8(const std::string& bytes);

// Canonical composition (NFC) over the full UCD canonical data,
// Hangul handled algorithmically.
std::vector<char32_t> nfc(const std::vector<char32_t>& in);
std::string nfc(const std::string& utf8);

// Simple per-codepoint lowercase fold; multi-codepoint lowerings are
// left unchanged.
char32_t to_lower(char32_t cp);
std::vector<char32_t> fold_case(const std::vector<char32_t>& in);
std::string fold_case(const std::string& utf8);

std::uint8_t combining_class(char32_t cp);

}  // namespace rx::uni
