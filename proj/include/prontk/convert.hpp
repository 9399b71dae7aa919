#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "prontk/core.hpp"
#include "prontk/lexicon.hpp"
#include "prontk/normalize.hpp"

namespace prontk {

// Grapheme-to-phoneme fallback used for words the lexicon does not know.
// Implementations must be deterministic per (provider, word) and safe for
// concurrent use.
class G2PProvider {
 public:
  virtual ~G2PProvider() = default;
  virtual std::optional<PronWord> pronounce(const std::string& word) const = 0;
};

// Always absent; plugs the fallback slot when G2P is disabled.
class NullG2P final : public G2PProvider {
 public:
  std::optional<PronWord> pronounce(const std::string&) const override {
    return std::nullopt;
  }
};

// Deterministic letter-cluster rules for English ("tion" -> sh-ah-n, "ch" ->
// ch, single letters -> default phonemes) applied longest-match first.
// A stand-in for an external G2P tool; absent for non-alphabetic input.
class RuleG2PEn final : public G2PProvider {
 public:
  std::optional<PronWord> pronounce(const std::string& word) const override;
};

std::optional<PronWord> rule_g2p_en(const std::string& word);

// Character -> Pinyin alternatives, first one wins.
class CharPinyinTable {
 public:
  CharPinyinTable() = default;

  // File rows: character<TAB>pinyin1[<TAB>pinyin2...]; '#' comments and
  // blank lines skipped. An optional "# zh-char-table <version>" line sets
  // the version.
  static CharPinyinTable load(const std::string& path);

  void add(std::string_view character, std::string pinyin);
  const std::vector<std::string>* find(char32_t c) const;
  std::size_t size() const { return pinyins_by_char_.size(); }
  const std::string& version() const { return version_; }

 private:
  std::unordered_map<char32_t, std::vector<std::string>> pinyins_by_char_;
  std::string version_ = "empty";
};

// Per-character first-Pinyin lookup; absent if any character is unmapped.
class RuleG2PZh final : public G2PProvider {
 public:
  explicit RuleG2PZh(CharPinyinTable table) : table_(std::move(table)) {}
  std::optional<PronWord> pronounce(const std::string& word) const override;
  const CharPinyinTable& table() const { return table_; }

 private:
  CharPinyinTable table_;
};

std::optional<PronWord> rule_g2p_zh(const std::string& word,
                                    const CharPinyinTable& table);

// Shells out to an external tool: one word per line on stdin, one '-'-joined
// pronunciation per line on stdout (an empty line meaning absent). Results
// are cached; the cache makes lookups thread-safe behind a mutex.
class ExternalG2P final : public G2PProvider {
 public:
  ExternalG2P(std::string command, UnitKind kind,
              const PhonemeInventory* inv = nullptr);
  ~ExternalG2P() override;
  std::optional<PronWord> pronounce(const std::string& word) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class NumberPolicy { Auto, Magnitude, DigitWise };
enum class OnMissing { Reject, SkipWord };

struct ConversionOptions {
  NumberPolicy number_policy = NumberPolicy::Auto;
  OnMissing on_missing = OnMissing::Reject;
  // Defaults to ZhNumberTable::standard() when null.
  const ZhNumberTable* zh_number_table = nullptr;
  // Latin tokens inside Chinese text fall through to this provider when the
  // Chinese lexicon and G2P miss (web-crawled Chinese text embeds English).
  const G2PProvider* latin_fallback = nullptr;
  const PhonemeInventory* inventory = nullptr;  // default: ARPAbet 39
};

enum class RejectionReason { NoPronunciation };

struct Rejection {
  std::string word;
  RejectionReason reason = RejectionReason::NoPronunciation;
};

// Either a pronunciation sentence or the word that blocked one.
class ConversionOutcome {
 public:
  static ConversionOutcome success(PronSentence s) {
    return ConversionOutcome(std::move(s));
  }
  static ConversionOutcome reject(Rejection r) {
    return ConversionOutcome(std::move(r));
  }

  bool ok() const { return std::holds_alternative<PronSentence>(value_); }
  const PronSentence& sentence() const { return std::get<PronSentence>(value_); }
  const Rejection& rejection() const { return std::get<Rejection>(value_); }

 private:
  explicit ConversionOutcome(PronSentence s) : value_(std::move(s)) {}
  explicit ConversionOutcome(Rejection r) : value_(std::move(r)) {}
  std::variant<PronSentence, Rejection> value_;
};

// The full text -> pronunciation pipeline: punctuation rules, then per token
// lexicon -> number path -> G2P -> rejection. Number expansions become one
// hyphen-joined pronunciation word. Never throws on well-formed input.
ConversionOutcome convert_sentence(const TextSentence& text, const Lexicon& lex,
                                   const G2PProvider* g2p,
                                   const ConversionOptions& opts = {});

// The dataset quadruple (s, t, s_p, t_p). Construction enforces that no
// component is empty.
struct DatasetEntry {
  TextSentence s;    // Chinese text
  TextSentence t;    // English text
  PronSentence s_p;  // Chinese pronunciation
  PronSentence t_p;  // English pronunciation

  DatasetEntry(TextSentence s_, TextSentence t_, PronSentence sp_,
               PronSentence tp_);
};

// Quadruple iff both sides convert and nothing is empty; absent otherwise.
std::optional<DatasetEntry> convert_pair(
    const TextSentence& s, const TextSentence& t, const Lexicon& zh_lex,
    const Lexicon& en_lex, const G2PProvider* zh_g2p, const G2PProvider* en_g2p,
    const ConversionOptions& opts = {});

}  // namespace prontk
