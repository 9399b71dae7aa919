#include "prontk/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace prontk {

namespace {

bool all_lower_latin(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

PhonemeInventory::PhonemeInventory(std::vector<std::string> phonemes,
                                   std::vector<std::string> vowels)
    : phonemes_(std::move(phonemes)), vowels_(std::move(vowels)) {
  for (const auto& p : phonemes_) {
    if (!all_lower_latin(p)) throw InvalidUnitError(p);
    vowel_by_phoneme_.emplace(p, false);
  }
  if (vowel_by_phoneme_.size() != phonemes_.size()) {
    throw Error("duplicate phonemes in inventory");
  }
  for (const auto& v : vowels_) {
    auto it = vowel_by_phoneme_.find(v);
    if (it == vowel_by_phoneme_.end()) {
      throw Error("vowel \"" + v + "\" is not in the phoneme set");
    }
    it->second = true;
  }
}

const PhonemeInventory& PhonemeInventory::arpabet() {
  static const PhonemeInventory inv(
      {"aa", "ae", "ah", "ao", "aw", "ay", "b",  "ch", "d",  "dh",
       "eh", "er", "ey", "f",  "g",  "hh", "ih", "iy", "jh", "k",
       "l",  "m",  "n",  "ng", "ow", "oy", "p",  "r",  "s",  "sh",
       "t",  "th", "uh", "uw", "v",  "w",  "y",  "z",  "zh"},
      {"aa", "ae", "ah", "ao", "aw", "ay", "eh", "er", "ey", "ih", "iy", "ow",
       "oy", "uh", "uw"});
  return inv;
}

bool PhonemeInventory::contains(std::string_view phoneme) const {
  return vowel_by_phoneme_.find(std::string(phoneme)) !=
         vowel_by_phoneme_.end();
}

bool PhonemeInventory::is_vowel_symbol(std::string_view phoneme) const {
  auto it = vowel_by_phoneme_.find(std::string(phoneme));
  return it != vowel_by_phoneme_.end() && it->second;
}

bool is_valid_pinyin(std::string_view token) {
  // base '_' tone, base nonempty lowercase Latin, tone in 1..5
  const auto sep = token.find('_');
  if (sep == std::string_view::npos || sep == 0 || sep + 2 != token.size()) {
    return false;
  }
  const char tone = token[sep + 1];
  if (tone < '1' || tone > '5') return false;
  return all_lower_latin(token.substr(0, sep));
}

bool is_valid_phoneme(std::string_view token, const PhonemeInventory& inv) {
  return all_lower_latin(token) && inv.contains(token);
}

PronUnit PronUnit::pinyin(std::string value) {
  if (!is_valid_pinyin(value)) throw InvalidUnitError(std::move(value));
  return PronUnit{std::move(value), UnitKind::Pinyin};
}

PronUnit PronUnit::phoneme(std::string value, const PhonemeInventory& inv) {
  if (!is_valid_phoneme(value, inv)) throw InvalidUnitError(std::move(value));
  return PronUnit{std::move(value), UnitKind::Phoneme};
}

PronUnit PronUnit::make(std::string value, UnitKind kind,
                        const PhonemeInventory& inv) {
  return kind == UnitKind::Pinyin ? pinyin(std::move(value))
                                  : phoneme(std::move(value), inv);
}

PronUnit PronUnit::make_structural(std::string value, UnitKind kind) {
  if (kind == UnitKind::Pinyin) return pinyin(std::move(value));
  if (!all_lower_latin(value)) throw InvalidUnitError(std::move(value));
  return PronUnit{std::move(value), UnitKind::Phoneme};
}

bool is_vowel(const PronUnit& unit, const PhonemeInventory& inv) {
  if (unit.kind != UnitKind::Phoneme) {
    throw WrongKindError("is_vowel is defined for phonemes only, got Pinyin \"" +
                         unit.value + "\"");
  }
  return inv.is_vowel_symbol(unit.value);
}

PronWord::PronWord(std::vector<PronUnit> units) : units_(std::move(units)) {
  if (units_.empty()) throw Error("a pronunciation word needs at least one unit");
  for (const auto& u : units_) {
    if (u.kind != units_.front().kind) {
      throw Error("mixed unit kinds in one pronunciation word");
    }
  }
}

namespace {

template <typename UnitFactory>
PronWord parse_word_with(std::string_view text, UnitFactory&& make_unit) {
  std::vector<PronUnit> units;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find('-', start);
    const auto token = text.substr(
        start, sep == std::string_view::npos ? std::string_view::npos
                                             : sep - start);
    units.push_back(make_unit(std::string(token)));
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  return PronWord(std::move(units));
}

}  // namespace

PronWord PronWord::parse(std::string_view text, UnitKind kind,
                         const PhonemeInventory& inv) {
  return parse_word_with(text, [&](std::string token) {
    return PronUnit::make(std::move(token), kind, inv);
  });
}

PronWord PronWord::parse_structural(std::string_view text, UnitKind kind) {
  return parse_word_with(text, [&](std::string token) {
    return PronUnit::make_structural(std::move(token), kind);
  });
}

namespace {

constexpr UnitKind other_kind(UnitKind kind) {
  return kind == UnitKind::Pinyin ? UnitKind::Phoneme : UnitKind::Pinyin;
}

}  // namespace

PronWord PronWord::parse_flexible(std::string_view text, UnitKind preferred,
                                  const PhonemeInventory& inv) {
  try {
    return parse(text, preferred, inv);
  } catch (const InvalidUnitError&) {
    try {
      return parse(text, other_kind(preferred), inv);
    } catch (const InvalidUnitError&) {
      throw InvalidUnitError(std::string(text));
    }
  }
}

PronWord PronWord::parse_flexible_structural(std::string_view text,
                                             UnitKind preferred) {
  try {
    return parse_structural(text, preferred);
  } catch (const InvalidUnitError&) {
    try {
      return parse_structural(text, other_kind(preferred));
    } catch (const InvalidUnitError&) {
      throw InvalidUnitError(std::string(text));
    }
  }
}

std::string PronWord::render() const {
  std::string out;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (i) out += '-';
    out += units_[i].value;
  }
  return out;
}

int vowel_count(const PronWord& word, const PhonemeInventory& inv) {
  int count = 0;
  for (const auto& u : word.units()) {
    if (is_vowel(u, inv)) ++count;
  }
  return count;
}

PronSentence::PronSentence(Lang lang, std::vector<PronWord> words)
    : lang_(lang), words_(std::move(words)) {}

PronSentence PronSentence::parse(std::string_view line, Lang lang,
                                 const PhonemeInventory& inv) {
  std::vector<PronWord> words;
  for (const auto& tok : split_ws(line)) {
    words.push_back(PronWord::parse_flexible(tok, unit_kind_for(lang), inv));
  }
  return PronSentence(lang, std::move(words));
}

PronSentence PronSentence::parse_structural(std::string_view line, Lang lang) {
  std::vector<PronWord> words;
  for (const auto& tok : split_ws(line)) {
    words.push_back(
        PronWord::parse_flexible_structural(tok, unit_kind_for(lang)));
  }
  return PronSentence(lang, std::move(words));
}

std::string PronSentence::render() const {
  std::string out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i) out += ' ';
    out += words_[i].render();
  }
  return out;
}

void PronSentence::push_back(PronWord w) { words_.push_back(std::move(w)); }

TextSentence::TextSentence(Lang lang, std::vector<std::string> tokens)
    : lang_(lang), tokens_(std::move(tokens)) {
  for (const auto& t : tokens_) {
    if (t.empty()) throw Error("empty token in a text sentence");
  }
}

TextSentence TextSentence::from_line(std::string_view line, Lang lang) {
  return TextSentence(lang, split_ws(line));
}

std::string TextSentence::render() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out += ' ';
    out += tokens_[i];
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
    }
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace prontk
