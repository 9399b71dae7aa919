#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace prontk::utf8 {

// Strict UTF-8 decoding; throws prontk::Error on malformed input.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
std::string encode(char32_t c);

// Code-point classes used by normalization and statistics. is_punct covers
// ASCII punctuation, Latin-1 punctuation, general punctuation (U+2000 block),
// CJK symbols/punctuation, and the fullwidth ASCII punctuation variants.
bool is_punct(char32_t c);
bool is_cjk_ideograph(char32_t c);

// True iff the token is nonempty and every code point is punctuation.
bool is_punct_only(std::string_view token);

}  // namespace prontk::utf8
