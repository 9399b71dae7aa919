#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prontk/errors.hpp"

namespace prontk {

enum class UnitKind { Pinyin, Phoneme };
enum class Lang { Zh, En };

// Zh sentences are pronounced in Pinyins, En sentences in phonemes.
constexpr UnitKind unit_kind_for(Lang lang) {
  return lang == Lang::Zh ? UnitKind::Pinyin : UnitKind::Phoneme;
}
constexpr Lang lang_for(UnitKind kind) {
  return kind == UnitKind::Pinyin ? Lang::Zh : Lang::En;
}

// The phoneme alphabet and its vowel subset. The default is the 39-symbol
// ARPAbet set used by CMU-style lexicons, lowercased with stress digits
// stripped. A custom inventory can be built from any lexicon's symbol set.
class PhonemeInventory {
 public:
  PhonemeInventory(std::vector<std::string> phonemes,
                   std::vector<std::string> vowels);

  static const PhonemeInventory& arpabet();

  bool contains(std::string_view phoneme) const;
  bool is_vowel_symbol(std::string_view phoneme) const;

  const std::vector<std::string>& phonemes() const { return phonemes_; }
  const std::vector<std::string>& vowels() const { return vowels_; }

 private:
  std::vector<std::string> phonemes_;
  std::vector<std::string> vowels_;
  std::unordered_map<std::string, bool> vowel_by_phoneme_;
};

// One atomic pronunciation symbol: a toned Pinyin such as "ni_3" or a
// phoneme such as "ah". Construction validates the token, so a PronUnit in
// hand is always well formed.
struct PronUnit {
  std::string value;
  UnitKind kind;

  static PronUnit pinyin(std::string value);
  static PronUnit phoneme(
      std::string value,
      const PhonemeInventory& inv = PhonemeInventory::arpabet());
  static PronUnit make(std::string value, UnitKind kind,
                       const PhonemeInventory& inv = PhonemeInventory::arpabet());

  // Structural validation only (no inventory membership); for readers of
  // wire formats whose producing inventory is not at hand.
  static PronUnit make_structural(std::string value, UnitKind kind);

  bool operator==(const PronUnit&) const = default;
};

// Structural checks used by the factories above; exposed for parsers that
// need to probe a token without throwing.
bool is_valid_pinyin(std::string_view token);
bool is_valid_phoneme(std::string_view token, const PhonemeInventory& inv);

// True iff the phoneme is in the inventory's vowel subset; Pinyins have no
// vowel predicate and raise WrongKindError.
bool is_vowel(const PronUnit& unit,
              const PhonemeInventory& inv = PhonemeInventory::arpabet());

// Ordered unit sequence for one word, rendered with '-' separators.
class PronWord {
 public:
  explicit PronWord(std::vector<PronUnit> units);

  static PronWord parse(
      std::string_view text, UnitKind kind,
      const PhonemeInventory& inv = PhonemeInventory::arpabet());
  static PronWord parse_structural(std::string_view text, UnitKind kind);

  // Tries the preferred kind first and falls back to the other; the two
  // token shapes are disjoint (Pinyins require the tone suffix, phonemes
  // forbid it), so mixed-script sentences parse unambiguously.
  static PronWord parse_flexible(
      std::string_view text, UnitKind preferred,
      const PhonemeInventory& inv = PhonemeInventory::arpabet());
  static PronWord parse_flexible_structural(std::string_view text,
                                            UnitKind preferred);

  std::string render() const;
  const std::vector<PronUnit>& units() const { return units_; }
  std::size_t size() const { return units_.size(); }
  UnitKind kind() const { return units_.front().kind; }

  bool operator==(const PronWord&) const = default;

 private:
  std::vector<PronUnit> units_;
};

int vowel_count(const PronWord& word,
                const PhonemeInventory& inv = PhonemeInventory::arpabet());

// Sequence of pronunciation words; punctuation never appears here. The lang
// tag names the sentence's language; individual words may carry the other
// unit kind (Latin words embedded in Chinese text keep their phonemes).
class PronSentence {
 public:
  explicit PronSentence(Lang lang, std::vector<PronWord> words = {});

  static PronSentence parse(
      std::string_view line, Lang lang,
      const PhonemeInventory& inv = PhonemeInventory::arpabet());
  static PronSentence parse_structural(std::string_view line, Lang lang);

  std::string render() const;
  const std::vector<PronWord>& words() const { return words_; }
  Lang lang() const { return lang_; }
  bool empty() const { return words_.empty(); }
  void push_back(PronWord w);

  bool operator==(const PronSentence&) const = default;

 private:
  Lang lang_;
  std::vector<PronWord> words_;
};

// Pre-segmented surface text; tokens are whitespace-delimited on input and
// joined by single spaces on output.
class TextSentence {
 public:
  explicit TextSentence(Lang lang, std::vector<std::string> tokens = {});

  static TextSentence from_line(std::string_view line, Lang lang);

  std::string render() const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  Lang lang() const { return lang_; }
  bool empty() const { return tokens_.empty(); }

  bool operator==(const TextSentence&) const = default;

 private:
  Lang lang_;
  std::vector<std::string> tokens_;
};

// Whitespace split with leading/trailing whitespace stripped.
std::vector<std::string> split_ws(std::string_view line);

}  // namespace prontk
