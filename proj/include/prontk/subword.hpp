#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prontk/core.hpp"

namespace prontk {

// Bijection between pronunciation units and single code points in a reserved
// private-use block, so pair merging can run over plain character strings.
// The mapping is internal; users only ever see '-'-joined units.
class PseudoCharMap {
 public:
  static constexpr char32_t kBlockStart = 0xE000;
  static constexpr std::size_t kBlockSize = 4096;

  PseudoCharMap() = default;

  // Deterministic assignment: units sorted lexicographically, then mapped to
  // consecutive code points from kBlockStart.
  explicit PseudoCharMap(std::vector<std::string> units);

  std::optional<char32_t> to_pseudo(const std::string& unit) const;
  const std::string* to_unit(char32_t cp) const;

  std::size_t size() const { return units_.size(); }
  const std::vector<std::string>& units() const { return units_; }

  bool operator==(const PseudoCharMap&) const = default;

 private:
  std::vector<std::string> units_;  // sorted; index = cp - kBlockStart
};

// Collects the distinct units of a corpus into a pseudo-character map.
PseudoCharMap build_pseudo_map(const std::vector<PronSentence>& corpus);

enum class SubwordKind { Plain, SyllableConstrained };

// Symbols are sequences of pseudo characters; result = left + right. Rank is
// the position in SubwordModel::merges.
struct MergeRule {
  std::u32string left;
  std::u32string right;
  std::u32string result() const { return left + right; }

  bool operator==(const MergeRule&) const = default;
};

enum class UnknownPolicy { Passthrough, Strict };
enum class DecodeStrictness { Lenient, Strict };

// A learned merge list over a pseudo-character alphabet. m is the merge
// budget requested at training time; merges.size() may be smaller when the
// corpus (or the syllable constraint) ran out of eligible pairs.
class SubwordModel {
 public:
  SubwordModel(SubwordKind kind, UnitKind unit_kind, std::size_t merge_budget,
               PseudoCharMap alphabet, std::vector<MergeRule> merges);

  SubwordKind kind() const { return kind_; }
  UnitKind unit_kind() const { return unit_kind_; }
  std::size_t merge_budget() const { return merge_budget_; }
  const PseudoCharMap& alphabet() const { return alphabet_; }
  const std::vector<MergeRule>& merges() const { return merges_; }
  bool stopped_early() const { return merges_.size() < merge_budget_; }

  // '-'-joined unit rendering of a pseudo symbol.
  std::string render_symbol(const std::u32string& symbol) const;
  bool in_vocab(const std::string& rendered_symbol) const;

  // (left, right) -> rank, precomputed for the encoder.
  using RankMap =
      std::map<std::pair<std::u32string, std::u32string>, std::size_t>;
  const RankMap& merge_ranks() const { return merge_ranks_; }

  void save(const std::string& path) const;
  static SubwordModel load(const std::string& path);

 private:
  SubwordKind kind_;
  UnitKind unit_kind_;
  std::size_t merge_budget_;
  PseudoCharMap alphabet_;
  std::vector<MergeRule> merges_;
  std::unordered_set<std::string> vocab_;  // alphabet units + merge results
  RankMap merge_ranks_;
};

// Classic pair-merge BPE: each iteration merges the globally most frequent
// adjacent symbol pair within words, ties broken by the lexicographically
// smallest (left, right). Word frequencies weight by corpus occurrences.
SubwordModel learn_bpe(const std::vector<PronSentence>& corpus,
                       std::size_t merge_budget);

// The vowel-constrained variant: a pair is eligible only if exactly one side
// contains exactly one vowel and the other contains none, so every produced
// symbol carries one and only one vowel. Stops early when no eligible pair
// remains.
SubwordModel learn_syllables(
    const std::vector<PronSentence>& corpus, std::size_t merge_budget,
    const PhonemeInventory& inv = PhonemeInventory::arpabet());

// Applies merges in rank order exhaustively within each word and returns the
// symbol tokens; the first token of each word carries the boundary marker
// "▁" so decoding can restore word boundaries. Units outside the model
// alphabet pass through as singleton symbols (or raise under Strict).
std::vector<std::string> encode(const SubwordModel& model,
                                const PronSentence& sentence,
                                UnknownPolicy policy = UnknownPolicy::Passthrough);

// Exact inverse of encode. Strict mode additionally requires every symbol to
// be in the model vocabulary.
PronSentence decode(const SubwordModel& model,
                    const std::vector<std::string>& tokens,
                    DecodeStrictness strictness = DecodeStrictness::Lenient);

// The word-boundary marker used in the encoded wire format.
inline constexpr std::string_view kWordBoundaryMarker = "\xE2\x96\x81";  // U+2581

}  // namespace prontk
