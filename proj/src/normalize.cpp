#include "prontk/normalize.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "prontk/utf8.hpp"

namespace prontk {

namespace {

constexpr std::array<std::u32string_view, 10> kDigits = {
    U"零", U"一", U"二", U"三", U"四", U"五", U"六", U"七", U"八", U"九"};
constexpr std::array<std::u32string_view, 4> kSmallUnits = {U"", U"十", U"百",
                                                            U"千"};
constexpr std::array<std::u32string_view, 5> kBigUnits = {U"", U"万", U"亿",
                                                          U"兆", U"京"};
constexpr char32_t kNegative = U'负';
constexpr char32_t kPoint = U'点';
constexpr char32_t kZero = U'零';

// One 4-digit group, value in 1..9999. Keeps the internal 一十 form; the
// caller trims it at the very front of the whole number.
std::u32string render_group(unsigned v) {
  std::u32string out;
  bool pending_zero = false;
  bool emitted = false;
  for (int pos = 3; pos >= 0; --pos) {
    const unsigned unit = static_cast<unsigned>(
        pos == 3 ? 1000 : pos == 2 ? 100 : pos == 1 ? 10 : 1);
    const unsigned d = (v / unit) % 10;
    if (d == 0) {
      if (emitted) pending_zero = true;
      continue;
    }
    if (pending_zero) {
      out += kZero;
      pending_zero = false;
    }
    out += kDigits[d];
    out += kSmallUnits[pos];
    emitted = true;
  }
  return out;
}

std::u32string render_magnitude(std::string_view digits) {
  // Strip leading zeros.
  std::size_t nz = 0;
  while (nz + 1 < digits.size() && digits[nz] == '0') ++nz;
  digits = digits.substr(nz);
  if (digits == "0") return std::u32string(1, kZero);

  // Group values, least significant first.
  std::vector<unsigned> groups;
  for (std::size_t end = digits.size(); end > 0;) {
    const std::size_t start = end >= 4 ? end - 4 : 0;
    unsigned v = 0;
    for (std::size_t i = start; i < end; ++i) {
      v = v * 10 + static_cast<unsigned>(digits[i] - '0');
    }
    groups.push_back(v);
    end = start;
  }

  std::u32string out;
  bool skipped_zero_group = false;
  for (std::size_t gi = groups.size(); gi-- > 0;) {
    const unsigned g = groups[gi];
    if (g == 0) {
      if (!out.empty()) skipped_zero_group = true;
      continue;
    }
    if (!out.empty() && (g < 1000 || skipped_zero_group)) out += kZero;
    skipped_zero_group = false;
    out += render_group(g);
    out += kBigUnits[gi];
  }
  // 10..19 and 一十万... read without the leading 一.
  if (out.size() >= 2 && out[0] == U'一' && out[1] == U'十') {
    out.erase(out.begin());
  }
  return out;
}

std::u32string render_digitwise(std::string_view digits) {
  std::u32string out;
  for (char c : digits) out += kDigits[static_cast<unsigned>(c - '0')];
  return out;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

constexpr std::array<std::string_view, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {
    "",      "",      "twenty",  "thirty", "forty",
    "fifty", "sixty", "seventy", "eighty", "ninety"};
constexpr std::array<std::string_view, 5> kScales = {"", "thousand", "million",
                                                     "billion", "trillion"};

void append_word(std::string& out, std::string_view word) {
  if (!out.empty()) out += ' ';
  out += word;
}

void render_below_hundred(std::string& out, unsigned v) {
  if (v < 20) {
    append_word(out, kOnes[v]);
  } else {
    append_word(out, kTens[v / 10]);
    if (v % 10) append_word(out, kOnes[v % 10]);
  }
}

// One 3-digit group; "and" between "hundred" and a nonzero remainder.
void render_group_en(std::string& out, unsigned v) {
  if (v >= 100) {
    append_word(out, kOnes[v / 100]);
    append_word(out, "hundred");
    if (v % 100) {
      append_word(out, "and");
      render_below_hundred(out, v % 100);
    }
  } else {
    render_below_hundred(out, v);
  }
}

}  // namespace

ZhNumberTable::ZhNumberTable(
    std::vector<std::pair<std::string, std::string>> rows, std::string version)
    : version_(std::move(version)) {
  for (const auto& [ch, pinyin] : rows) {
    const auto cps = utf8::decode(ch);
    if (cps.size() != 1) {
      throw Error("numeral table keys must be single characters: \"" + ch +
                  "\"");
    }
    if (!is_valid_pinyin(pinyin)) throw InvalidUnitError(pinyin);
    if (!pinyin_by_char_.emplace(cps[0], pinyin).second) {
      throw Error("duplicate numeral table row: \"" + ch + "\"");
    }
  }
  static constexpr std::u32string_view kDomain = U"零一二三四五六七八九十百千万亿兆京点";
  for (char32_t c : kDomain) {
    if (pinyin_by_char_.find(c) == pinyin_by_char_.end()) {
      throw Error("numeral table is missing character \"" + utf8::encode(c) +
                  "\"");
    }
  }
}

const ZhNumberTable& ZhNumberTable::standard() {
  static const ZhNumberTable table(
      {{"零", "ling_2"},
       {"一", "yi_1"},
       {"二", "er_4"},
       {"三", "san_1"},
       {"四", "si_4"},
       {"五", "wu_3"},
       {"六", "liu_4"},
       {"七", "qi_1"},
       {"八", "ba_1"},
       {"九", "jiu_3"},
       {"十", "shi_2"},
       {"百", "bai_3"},
       {"千", "qian_1"},
       {"万", "wan_4"},
       {"亿", "yi_4"},
       {"兆", "zhao_4"},
       {"京", "jing_1"},
       {"点", "dian_3"}},
      "builtin-1");
  return table;
}

ZhNumberTable ZhNumberTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open numeral table: " + path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string version = "unversioned";
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# zh-number-table ", 0) == 0) {
      version = line.substr(18);
      continue;
    }
    bool blank = true;
    for (char c : line) {
      if (c == '#') break;
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    auto fields = split_ws(line);
    if (fields.size() != 2) {
      throw ParseError(path, line_no, "expected character<WS>pinyin");
    }
    rows.emplace_back(fields[0], fields[1]);
  }
  try {
    return ZhNumberTable(std::move(rows), std::move(version));
  } catch (const Error& e) {
    throw ParseError(path, line_no, e.what());
  }
}

const std::string* ZhNumberTable::find(char32_t c) const {
  auto it = pinyin_by_char_.find(c);
  return it == pinyin_by_char_.end() ? nullptr : &it->second;
}

std::string zh_int_to_chinese(std::string_view digits, bool negative,
                              NumberReadingMode mode) {
  if (!all_digits(digits)) throw NotANumberError(std::string(digits));
  if (digits.size() > 20) {
    throw OverflowError("number beyond the 京 range: " + std::string(digits));
  }
  std::u32string out;
  if (negative) out += kNegative;
  out += mode == NumberReadingMode::Magnitude ? render_magnitude(digits)
                                              : render_digitwise(digits);
  return utf8::encode(out);
}

std::string zh_int_to_chinese(long long n, NumberReadingMode mode) {
  const bool negative = n < 0;
  std::string digits =
      negative ? std::to_string(-(unsigned long long)(n)) : std::to_string(n);
  return zh_int_to_chinese(digits, negative, mode);
}

std::string zh_decimal_to_chinese(std::string_view text,
                                  NumberReadingMode mode) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && rest.front() == '-') {
    negative = true;
    rest.remove_prefix(1);
  }
  const auto dot = rest.find('.');
  const auto int_part = dot == std::string_view::npos ? rest : rest.substr(0, dot);
  const auto frac_part =
      dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  if (!all_digits(int_part) ||
      (dot != std::string_view::npos && !all_digits(frac_part))) {
    throw NotANumberError(std::string(text));
  }
  std::string out = zh_int_to_chinese(int_part, negative, mode);
  if (dot != std::string_view::npos) {
    out += utf8::encode(kPoint);
    out += utf8::encode(render_digitwise(frac_part));
  }
  return out;
}

PronWord chinese_numeral_to_pinyin(std::string_view chars,
                                   const ZhNumberTable& table) {
  std::vector<PronUnit> units;
  for (char32_t c : utf8::decode(chars)) {
    const std::string* pinyin = table.find(c);
    if (!pinyin) throw UnknownNumeralError(utf8::encode(c));
    units.push_back(PronUnit::pinyin(*pinyin));
  }
  if (units.empty()) throw UnknownNumeralError("");
  return PronWord(std::move(units));
}

std::string en_int_to_words(std::string_view digits, bool negative) {
  if (!all_digits(digits)) throw NotANumberError(std::string(digits));
  std::size_t nz = 0;
  while (nz + 1 < digits.size() && digits[nz] == '0') ++nz;
  digits = digits.substr(nz);
  if (digits.size() > 15) {
    throw OverflowError("number beyond the trillion range: " +
                        std::string(digits));
  }
  std::string out;
  if (negative) out = "minus";
  if (digits == "0") {
    append_word(out, "zero");
    return out;
  }
  std::vector<unsigned> groups;  // least significant first
  for (std::size_t end = digits.size(); end > 0;) {
    const std::size_t start = end >= 3 ? end - 3 : 0;
    unsigned v = 0;
    for (std::size_t i = start; i < end; ++i) {
      v = v * 10 + static_cast<unsigned>(digits[i] - '0');
    }
    groups.push_back(v);
    end = start;
  }
  bool higher_emitted = false;
  for (std::size_t gi = groups.size(); gi-- > 0;) {
    const unsigned g = groups[gi];
    if (g == 0) continue;
    // "two thousand and five": a bare final sub-hundred remainder takes
    // "and" when anything precedes it.
    if (gi == 0 && g < 100 && higher_emitted) append_word(out, "and");
    render_group_en(out, g);
    if (gi > 0) {
      append_word(out, kScales[gi]);
      higher_emitted = true;
    }
  }
  return out;
}

std::string en_int_to_words(long long n) {
  const bool negative = n < 0;
  std::string digits =
      negative ? std::to_string(-(unsigned long long)(n)) : std::to_string(n);
  return en_int_to_words(digits, negative);
}

bool is_number_token(std::string_view token) {
  if (!token.empty() && token.front() == '-') token.remove_prefix(1);
  const auto dot = token.find('.');
  if (dot == std::string_view::npos) return all_digits(token);
  return all_digits(token.substr(0, dot)) && all_digits(token.substr(dot + 1));
}

namespace {

// "1,000" / "-1,234,567.89" / "1,000%": digit-grouping commas inside an
// otherwise plain number token.
bool strip_group_commas(std::string& token) {
  std::string_view v = token;
  std::string_view core = v;
  if (!core.empty() && core.front() == '-') core.remove_prefix(1);
  if (!core.empty() && core.back() == '%') core.remove_suffix(1);
  const auto dot = core.find('.');
  std::string_view frac;
  if (dot != std::string_view::npos) {
    frac = core.substr(dot + 1);
    core = core.substr(0, dot);
    if (!all_digits(frac)) return false;
  }
  // core must look like \d{1,3}(,\d{3})+
  const auto first_comma = core.find(',');
  if (first_comma == std::string_view::npos || first_comma == 0 ||
      first_comma > 3) {
    return false;
  }
  std::size_t i = 0;
  for (char c : core.substr(0, first_comma)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  i = first_comma;
  while (i < core.size()) {
    if (core[i] != ',') return false;
    if (i + 4 > core.size()) return false;
    for (std::size_t k = i + 1; k < i + 4; ++k) {
      if (!std::isdigit(static_cast<unsigned char>(core[k]))) return false;
    }
    i += 4;
  }
  std::string out;
  for (char c : token) {
    if (c != ',') out.push_back(c);
  }
  token = out;
  return true;
}

}  // namespace

TextSentence apply_punct_rules(const TextSentence& text) {
  std::vector<std::string> out;
  const auto& in = text.tokens();
  for (std::size_t i = 0; i < in.size(); ++i) {
    std::string token = in[i];
    strip_group_commas(token);

    // Percent attached ("50%") or as the next token ("50" "%").
    std::string number;
    if (token.size() > 1 && token.back() == '%' &&
        is_number_token(std::string_view(token).substr(0, token.size() - 1))) {
      number = token.substr(0, token.size() - 1);
    } else if (is_number_token(token) && i + 1 < in.size() && in[i + 1] == "%") {
      number = token;
      ++i;
    }
    if (!number.empty()) {
      if (text.lang() == Lang::Zh) {
        out.push_back("百分之");
        out.push_back(std::move(number));
      } else {
        out.push_back(std::move(number));
        out.push_back("percentage");
      }
      continue;
    }

    if (utf8::is_punct_only(token)) continue;
    out.push_back(std::move(token));
  }
  return TextSentence(text.lang(), std::move(out));
}

}  // namespace prontk
