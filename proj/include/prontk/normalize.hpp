#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prontk/core.hpp"

namespace prontk {

// Magnitude reads "22" as 二十二; DigitWise maps digits independently
// (二二 for 22, 二零零五 for 2005). Years take the digit-wise reading.
enum class NumberReadingMode { Magnitude, DigitWise };

// Chinese numeral character -> Pinyin, the mapping used character by
// character after digits are spelled out as Chinese text numbers.
class ZhNumberTable {
 public:
  // rows: one (character, pinyin) pair per numeral character. The table must
  // cover the full 18-character numeral domain 零一二三四五六七八九十百千万亿兆京点.
  ZhNumberTable(std::vector<std::pair<std::string, std::string>> rows,
                std::string version);

  // Built-in default. 五/九 are shipped as wu_3/jiu_3; the file loader exists
  // so alternates stay a data change, not a code change.
  static const ZhNumberTable& standard();

  // File format: '#'-comment and blank lines skipped; a comment line
  // "# zh-number-table <version>" sets the version; rows are
  // character<WS>pinyin.
  static ZhNumberTable load(const std::string& path);

  const std::string* find(char32_t c) const;
  const std::string& version() const { return version_; }

 private:
  std::unordered_map<char32_t, std::string> pinyin_by_char_;
  std::string version_;
};

// Chinese text numbers from decimal digits. |n| below 10^20 (the 京 ceiling);
// negative numbers take a leading 负.
std::string zh_int_to_chinese(long long n, NumberReadingMode mode);
std::string zh_int_to_chinese(std::string_view digits, bool negative,
                              NumberReadingMode mode);

// Accepts an optional '-', digits, and an optional '.' fraction; the integer
// part follows the mode, '.' becomes 点, fraction digits read digit-wise.
std::string zh_decimal_to_chinese(std::string_view text, NumberReadingMode mode);

// Character-by-character table lookup, concatenated into one PronWord.
PronWord chinese_numeral_to_pinyin(
    std::string_view chars, const ZhNumberTable& table = ZhNumberTable::standard());

// English cardinal words, lowercase, no hyphens; "and" before a trailing
// sub-hundred remainder ("two thousand and five"); "minus" for negatives.
// |n| below 10^15.
std::string en_int_to_words(long long n);
std::string en_int_to_words(std::string_view digits, bool negative);

// Token-level probes shared with the conversion pipeline.
bool is_number_token(std::string_view token);  // -?digits[.digits]

// Pronunciation-affecting punctuation handling: numeric-group commas are
// removed inside number tokens, a '%' attached or adjacent to a number turns
// into 百分之 (before, Chinese) or "percentage" (after, English), and tokens
// made of punctuation only are dropped. Everything else passes through.
TextSentence apply_punct_rules(const TextSentence& text);

}  // namespace prontk
