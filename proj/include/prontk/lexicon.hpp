#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "prontk/core.hpp"

namespace prontk {

enum class LexiconFormat {
  // word<TAB>pron1<TAB>pron2..., units '-'-joined. Canonical fixture format.
  SimpleTSV,
  // CMU/Voxforge style: WORD [WORD] PH1 PH2 ..., with WORD(2) alternates
  // folded into the same entry. Phonemes are lowercased and stress digits
  // stripped; headwords are lowercased.
  Voxforge,
  // Two files: word -> ids and id -> pinyin, merged at load.
  DaCiDian,
};

enum class LoadMode { Lenient, Strict };

struct LexiconEntry {
  std::string word;
  std::vector<PronWord> pronunciations;  // file order preserved
};

struct LexiconLoadReport {
  std::size_t entries = 0;         // distinct headwords
  std::size_t pronunciations = 0;  // including alternates
  std::size_t skipped_lines = 0;   // lenient mode only
};

// Immutable word -> pronunciations table. Lookups are safe from any number
// of concurrent threads once loading finished.
class Lexicon {
 public:
  explicit Lexicon(Lang lang);

  Lang lang() const { return lang_; }
  UnitKind unit_kind() const { return unit_kind_for(lang_); }
  std::size_t size() const { return entries_.size(); }

  const LexiconEntry* find(std::string_view word) const;

  // The first-pronunciation rule for ambiguous words: always the first one in
  // file order. Absence is a value, not an error.
  std::optional<PronWord> lookup_first(std::string_view word) const;

  // Seeded alternative kept for comparison runs; never the default.
  std::optional<PronWord> lookup_random(std::string_view word,
                                        std::uint64_t seed) const;

  // Appends a pronunciation, creating the entry on first sight.
  void add(const std::string& word, PronWord pron);

  // Canonical dump: entries sorted by headword, pronunciations in file
  // order. Used for determinism and no-mutation checks.
  std::string canonical_dump() const;

 private:
  Lang lang_;
  std::unordered_map<std::string, LexiconEntry> entries_;
};

struct LexiconLoadOptions {
  LoadMode mode = LoadMode::Lenient;
  const PhonemeInventory* inventory = nullptr;  // default: ARPAbet 39
};

Lexicon load_lexicon(const std::string& path, Lang lang, LexiconFormat format,
                     const LexiconLoadOptions& opts = {},
                     LexiconLoadReport* report = nullptr);

// DaCiDian-style loader; word_to_ids maps a headword to id sequences
// (alternates ';'-separated), ids_to_pinyin maps each id to one Pinyin.
Lexicon load_dacidian(const std::string& word_to_ids_path,
                      const std::string& ids_to_pinyin_path,
                      const LexiconLoadOptions& opts = {},
                      LexiconLoadReport* report = nullptr);

std::string lowercase_ascii(std::string_view s);

}  // namespace prontk
