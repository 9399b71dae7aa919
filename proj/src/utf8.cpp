#include "prontk/utf8.hpp"

#include "prontk/errors.hpp"

namespace prontk::utf8 {

namespace {

[[noreturn]] void bad(std::string_view s) {
  throw Error("malformed UTF-8 in \"" + std::string(s) + "\"");
}

}  // namespace

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad(s);
    }
    if (i + len > s.size()) bad(s);
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) bad(s);
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogate halves.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad(s);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 3);
  for (char32_t c : s) out += encode(c);
  return out;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  if (c == 0x00A1 || c == 0x00A7 || c == 0x00AB || c == 0x00B6 ||
      c == 0x00B7 || c == 0x00BB || c == 0x00BF) {
    return true;
  }
  if (c >= 0x2000 && c <= 0x206F) return true;   // general punctuation
  if (c >= 0x2E00 && c <= 0x2E7F) return true;   // supplemental punctuation
  if (c >= 0x3000 && c <= 0x303F) return true;   // CJK symbols and punctuation
  if (c == 0x30FB) return true;                  // katakana middle dot
  if (c >= 0xFE30 && c <= 0xFE4F) return true;   // CJK compatibility forms
  if (c >= 0xFE50 && c <= 0xFE6F) return true;   // small form variants
  if (c >= 0xFF01 && c <= 0xFF0F) return true;   // fullwidth ! .. /
  if (c >= 0xFF1A && c <= 0xFF20) return true;   // fullwidth : .. @
  if (c >= 0xFF3B && c <= 0xFF40) return true;   // fullwidth [ .. `
  if (c >= 0xFF5B && c <= 0xFF65) return true;   // fullwidth { .. halfwidth .
  return false;
}

bool is_cjk_ideograph(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) ||   // unified ideographs
         (c >= 0x3400 && c <= 0x4DBF) ||   // extension A
         (c >= 0xF900 && c <= 0xFAFF) ||   // compatibility ideographs
         (c >= 0x20000 && c <= 0x2A6DF);   // extension B
}

bool is_punct_only(std::string_view token) {
  if (token.empty()) return false;
  for (char32_t c : decode(token)) {
    if (!is_punct(c)) return false;
  }
  return true;
}

}  // namespace prontk::utf8
