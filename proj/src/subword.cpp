#include "prontk/subword.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "prontk/utf8.hpp"

namespace prontk {

PseudoCharMap::PseudoCharMap(std::vector<std::string> units)
    : units_(std::move(units)) {
  std::sort(units_.begin(), units_.end());
  units_.erase(std::unique(units_.begin(), units_.end()), units_.end());
  if (units_.size() > kBlockSize) {
    throw AlphabetOverflowError(
        "corpus has " + std::to_string(units_.size()) +
        " distinct units; the reserved block holds " +
        std::to_string(kBlockSize));
  }
}

std::optional<char32_t> PseudoCharMap::to_pseudo(const std::string& unit) const {
  const auto it = std::lower_bound(units_.begin(), units_.end(), unit);
  if (it == units_.end() || *it != unit) return std::nullopt;
  return kBlockStart + static_cast<char32_t>(it - units_.begin());
}

const std::string* PseudoCharMap::to_unit(char32_t cp) const {
  if (cp < kBlockStart || cp >= kBlockStart + units_.size()) return nullptr;
  return &units_[cp - kBlockStart];
}

PseudoCharMap build_pseudo_map(const std::vector<PronSentence>& corpus) {
  std::vector<std::string> units;
  std::unordered_set<std::string> seen;
  for (const auto& sentence : corpus) {
    for (const auto& word : sentence.words()) {
      for (const auto& unit : word.units()) {
        if (seen.insert(unit.value).second) units.push_back(unit.value);
      }
    }
  }
  return PseudoCharMap(std::move(units));
}

namespace {

using SymbolPair = std::pair<std::u32string, std::u32string>;

// Greedy left-to-right single pass: replace (left, right) by their
// concatenation, continuing after each replacement. Shared verbatim by the
// trainer's replacement step and by encode so both walk the same path.
std::vector<std::u32string> merge_pair_in_word(
    const std::vector<std::u32string>& symbols, const std::u32string& left,
    const std::u32string& right) {
  std::vector<std::u32string> out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    if (i + 1 < symbols.size() && symbols[i] == left &&
        symbols[i + 1] == right) {
      out.push_back(left + right);
      i += 2;
    } else {
      out.push_back(symbols[i]);
      ++i;
    }
  }
  return out;
}

class Trainer {
 public:
  Trainer(const std::vector<PronSentence>& corpus, const PseudoCharMap& map,
          const PhonemeInventory* inv_for_vowels) {
    // Word types weighted by corpus occurrences.
    std::map<std::u32string, long long> type_counts;
    for (const auto& sentence : corpus) {
      for (const auto& word : sentence.words()) {
        std::u32string pseudo;
        for (const auto& unit : word.units()) {
          pseudo.push_back(*map.to_pseudo(unit.value));
        }
        ++type_counts[pseudo];
      }
    }
    for (const auto& [pseudo, count] : type_counts) {
      std::vector<std::u32string> symbols;
      symbols.reserve(pseudo.size());
      for (char32_t c : pseudo) symbols.emplace_back(1, c);
      words_.push_back(std::move(symbols));
      counts_.push_back(count);
    }
    if (inv_for_vowels) {
      vowel_flags_.resize(map.size(), false);
      for (std::size_t i = 0; i < map.size(); ++i) {
        vowel_flags_[i] = inv_for_vowels->is_vowel_symbol(map.units()[i]);
      }
    }
    for (std::size_t w = 0; w < words_.size(); ++w) add_word_pairs(w);
  }

  // Runs the merge loop; constrained mode admits only pairs where exactly
  // one side holds one vowel and the other holds none.
  std::vector<MergeRule> run(std::size_t merge_budget, bool constrained) {
    std::vector<MergeRule> merges;
    while (merges.size() < merge_budget) {
      const SymbolPair* best = nullptr;
      long long best_count = 0;
      for (const auto& [pair, count] : pair_counts_) {
        if (count <= 0) continue;
        if (constrained && !eligible(pair)) continue;
        // std::map iterates in (left, right) order, so the first maximum is
        // already the lexicographically smallest tie.
        if (count > best_count) {
          best = &pair;
          best_count = count;
        }
      }
      if (!best) break;  // no pair left (or none eligible): early stop
      const SymbolPair selected = *best;
      merges.push_back(MergeRule{selected.first, selected.second});
      apply_merge(selected);
    }
    return merges;
  }

 private:
  int vowels_in(const std::u32string& symbol) const {
    int n = 0;
    for (char32_t c : symbol) {
      n += vowel_flags_[c - PseudoCharMap::kBlockStart] ? 1 : 0;
    }
    return n;
  }

  bool eligible(const SymbolPair& pair) const {
    const int l = vowels_in(pair.first);
    const int r = vowels_in(pair.second);
    return (l == 1 && r == 0) || (l == 0 && r == 1);
  }

  void add_word_pairs(std::size_t w) {
    const auto& symbols = words_[w];
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      pair_counts_[{symbols[i], symbols[i + 1]}] += counts_[w];
      pair_words_[{symbols[i], symbols[i + 1]}].insert(w);
    }
  }

  void remove_word_pairs(std::size_t w) {
    const auto& symbols = words_[w];
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const SymbolPair pair{symbols[i], symbols[i + 1]};
      auto it = pair_counts_.find(pair);
      it->second -= counts_[w];
      if (it->second <= 0) pair_counts_.erase(it);
      pair_words_[pair].erase(w);
    }
  }

  void apply_merge(const SymbolPair& pair) {
    const auto holders_it = pair_words_.find(pair);
    if (holders_it == pair_words_.end()) return;
    const std::set<std::size_t> holders = holders_it->second;
    for (std::size_t w : holders) {
      remove_word_pairs(w);
      words_[w] = merge_pair_in_word(words_[w], pair.first, pair.second);
      add_word_pairs(w);
    }
    pair_words_.erase(pair);
  }

  std::vector<std::vector<std::u32string>> words_;
  std::vector<long long> counts_;
  std::vector<bool> vowel_flags_;
  std::map<SymbolPair, long long> pair_counts_;
  std::map<SymbolPair, std::set<std::size_t>> pair_words_;
};

void require_kind(const std::vector<PronSentence>& corpus, UnitKind kind) {
  for (const auto& sentence : corpus) {
    for (const auto& word : sentence.words()) {
      if (word.kind() != kind) {
        throw WrongKindError("corpus unit kind does not match the learner");
      }
    }
  }
}

UnitKind corpus_kind(const std::vector<PronSentence>& corpus, UnitKind fallback) {
  for (const auto& sentence : corpus) {
    if (!sentence.words().empty()) return sentence.words().front().kind();
  }
  return fallback;
}

}  // namespace

SubwordModel::SubwordModel(SubwordKind kind, UnitKind unit_kind,
                           std::size_t merge_budget, PseudoCharMap alphabet,
                           std::vector<MergeRule> merges)
    : kind_(kind),
      unit_kind_(unit_kind),
      merge_budget_(merge_budget),
      alphabet_(std::move(alphabet)),
      merges_(std::move(merges)) {
  if (merges_.size() > merge_budget_) {
    throw Error("merge list exceeds the merge budget");
  }
  for (const auto& unit : alphabet_.units()) vocab_.insert(unit);
  for (const auto& rule : merges_) vocab_.insert(render_symbol(rule.result()));
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    merge_ranks_[{merges_[r].left, merges_[r].right}] = r;
  }
}

std::string SubwordModel::render_symbol(const std::u32string& symbol) const {
  std::string out;
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const std::string* unit = alphabet_.to_unit(symbol[i]);
    if (!unit) throw Error("symbol references a code point outside the alphabet");
    if (i) out += '-';
    out += *unit;
  }
  return out;
}

bool SubwordModel::in_vocab(const std::string& rendered_symbol) const {
  return vocab_.find(rendered_symbol) != vocab_.end();
}

SubwordModel learn_bpe(const std::vector<PronSentence>& corpus,
                       std::size_t merge_budget) {
  const UnitKind kind = corpus_kind(corpus, UnitKind::Phoneme);
  require_kind(corpus, kind);
  PseudoCharMap map = build_pseudo_map(corpus);
  Trainer trainer(corpus, map, nullptr);
  auto merges = trainer.run(merge_budget, /*constrained=*/false);
  return SubwordModel(SubwordKind::Plain, kind, merge_budget, std::move(map),
                      std::move(merges));
}

SubwordModel learn_syllables(const std::vector<PronSentence>& corpus,
                             std::size_t merge_budget,
                             const PhonemeInventory& inv) {
  require_kind(corpus, UnitKind::Phoneme);
  PseudoCharMap map = build_pseudo_map(corpus);
  Trainer trainer(corpus, map, &inv);
  auto merges = trainer.run(merge_budget, /*constrained=*/true);
  return SubwordModel(SubwordKind::SyllableConstrained, UnitKind::Phoneme,
                      merge_budget, std::move(map), std::move(merges));
}

std::vector<std::string> encode(const SubwordModel& model,
                                const PronSentence& sentence,
                                UnknownPolicy policy) {
  if (unit_kind_for(sentence.lang()) != model.unit_kind()) {
    throw WrongKindError("sentence unit kind does not match the model");
  }
  const auto& rank = model.merge_ranks();

  std::vector<std::string> out;
  for (const auto& word : sentence.words()) {
    // Unknown units split the word into independently encoded segments;
    // no merge could cross them anyway.
    std::vector<std::string> word_tokens;
    std::vector<std::u32string> segment;
    auto flush_segment = [&] {
      if (segment.empty()) return;
      while (true) {
        std::size_t best_rank = rank.size();
        for (std::size_t i = 0; i + 1 < segment.size(); ++i) {
          auto it = rank.find({segment[i], segment[i + 1]});
          if (it != rank.end() && it->second < best_rank) best_rank = it->second;
        }
        if (best_rank == rank.size()) break;
        const MergeRule& rule = model.merges()[best_rank];
        segment = merge_pair_in_word(segment, rule.left, rule.right);
      }
      for (const auto& symbol : segment) {
        word_tokens.push_back(model.render_symbol(symbol));
      }
      segment.clear();
    };
    for (const auto& unit : word.units()) {
      if (auto cp = model.alphabet().to_pseudo(unit.value)) {
        segment.emplace_back(1, *cp);
      } else {
        if (policy == UnknownPolicy::Strict) throw UnknownUnitError(unit.value);
        flush_segment();
        word_tokens.push_back(unit.value);
      }
    }
    flush_segment();
    for (std::size_t i = 0; i < word_tokens.size(); ++i) {
      if (i == 0) {
        out.push_back(std::string(kWordBoundaryMarker) + word_tokens[i]);
      } else {
        out.push_back(std::move(word_tokens[i]));
      }
    }
  }
  return out;
}

PronSentence decode(const SubwordModel& model,
                    const std::vector<std::string>& tokens,
                    DecodeStrictness strictness) {
  const Lang lang = lang_for(model.unit_kind());
  PronSentence sentence(lang);
  std::vector<PronUnit> current;
  auto flush = [&] {
    if (!current.empty()) {
      sentence.push_back(PronWord(std::move(current)));
      current.clear();
    }
  };
  bool first = true;
  for (const auto& token : tokens) {
    std::string_view body = token;
    const bool boundary = body.substr(0, kWordBoundaryMarker.size()) ==
                          kWordBoundaryMarker;
    if (boundary) {
      body.remove_prefix(kWordBoundaryMarker.size());
      flush();
    } else if (first && strictness == DecodeStrictness::Strict) {
      throw MalformedTokenError(token);
    }
    first = false;
    if (body.empty()) throw MalformedTokenError(token);
    PronWord symbol_units = [&] {
      try {
        return PronWord::parse_flexible_structural(body, model.unit_kind());
      } catch (const Error&) {
        throw MalformedTokenError(token);
      }
    }();
    if (strictness == DecodeStrictness::Strict &&
        !model.in_vocab(std::string(body))) {
      throw MalformedTokenError(token);
    }
    for (const auto& unit : symbol_units.units()) current.push_back(unit);
  }
  flush();
  return sentence;
}

namespace {

constexpr std::string_view kModelMagic = "prontk-subword";
constexpr int kModelVersion = 1;

std::string format_codepoint(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string expect_line(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CorruptModelError("truncated model file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// "key value" with the exact key required.
std::string expect_field(std::istream& in, const std::string& path,
                         std::string_view key) {
  const std::string line = expect_line(in, path);
  const auto space = line.find(' ');
  if (space == std::string::npos || line.substr(0, space) != key) {
    throw CorruptModelError("expected \"" + std::string(key) +
                            " ...\" in model file: " + path);
  }
  return line.substr(space + 1);
}

std::size_t parse_count(const std::string& text, const std::string& path) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CorruptModelError("bad count \"" + text + "\" in model file: " + path);
  }
}

}  // namespace

void SubwordModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  out << kModelMagic << " v" << kModelVersion << "\n";
  out << "kind " << (kind_ == SubwordKind::Plain ? "plain" : "syllable") << "\n";
  out << "units "
      << (unit_kind_ == UnitKind::Pinyin ? "pinyin" : "phoneme") << "\n";
  out << "m " << merge_budget_ << "\n";
  out << "alphabet " << alphabet_.size() << "\n";
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    out << alphabet_.units()[i] << ' '
        << format_codepoint(PseudoCharMap::kBlockStart +
                            static_cast<char32_t>(i))
        << "\n";
  }
  out << "merges " << merges_.size() << "\n";
  for (const auto& rule : merges_) {
    out << render_symbol(rule.left) << ' ' << render_symbol(rule.right) << "\n";
  }
  out << "end\n";
  if (!out) throw IoError("failed while writing model file: " + path);
}

SubwordModel SubwordModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  const std::string magic_line = expect_line(in, path);
  if (magic_line.rfind(kModelMagic, 0) != 0) {
    throw CorruptModelError("not a subword model file: " + path);
  }
  const std::string version = magic_line.substr(kModelMagic.size());
  if (version != " v" + std::to_string(kModelVersion)) {
    throw VersionMismatchError("unsupported model version \"" + version +
                               "\" in " + path);
  }

  const std::string kind_text = expect_field(in, path, "kind");
  SubwordKind kind;
  if (kind_text == "plain") {
    kind = SubwordKind::Plain;
  } else if (kind_text == "syllable") {
    kind = SubwordKind::SyllableConstrained;
  } else {
    throw CorruptModelError("unknown model kind \"" + kind_text + "\"");
  }

  const std::string units_text = expect_field(in, path, "units");
  UnitKind unit_kind;
  if (units_text == "pinyin") {
    unit_kind = UnitKind::Pinyin;
  } else if (units_text == "phoneme") {
    unit_kind = UnitKind::Phoneme;
  } else {
    throw CorruptModelError("unknown unit kind \"" + units_text + "\"");
  }

  const std::size_t budget = parse_count(expect_field(in, path, "m"), path);
  const std::size_t alphabet_size =
      parse_count(expect_field(in, path, "alphabet"), path);

  std::vector<std::string> units;
  units.reserve(alphabet_size);
  for (std::size_t i = 0; i < alphabet_size; ++i) {
    const std::string line = expect_line(in, path);
    const auto space = line.find(' ');
    if (space == std::string::npos) {
      throw CorruptModelError("bad alphabet row \"" + line + "\" in " + path);
    }
    const std::string unit = line.substr(0, space);
    const std::string expected = format_codepoint(
        PseudoCharMap::kBlockStart + static_cast<char32_t>(i));
    if (line.substr(space + 1) != expected) {
      throw CorruptModelError("alphabet row \"" + line +
                              "\" is out of order in " + path);
    }
    units.push_back(unit);
  }
  PseudoCharMap map(units);
  if (map.size() != alphabet_size || map.units() != units) {
    throw CorruptModelError("alphabet section is not sorted/unique in " + path);
  }

  const std::size_t merge_count =
      parse_count(expect_field(in, path, "merges"), path);
  std::vector<MergeRule> merges;
  merges.reserve(merge_count);
  auto symbol_from = [&](const std::string& rendered) {
    std::u32string symbol;
    const PronWord word = PronWord::parse_structural(rendered, unit_kind);
    for (const auto& unit : word.units()) {
      auto cp = map.to_pseudo(unit.value);
      if (!cp) {
        throw CorruptModelError("merge references unknown unit \"" +
                                unit.value + "\" in " + path);
      }
      symbol.push_back(*cp);
    }
    return symbol;
  };
  for (std::size_t i = 0; i < merge_count; ++i) {
    const std::string line = expect_line(in, path);
    const auto space = line.find(' ');
    if (space == std::string::npos) {
      throw CorruptModelError("bad merge row \"" + line + "\" in " + path);
    }
    try {
      merges.push_back(MergeRule{symbol_from(line.substr(0, space)),
                                 symbol_from(line.substr(space + 1))});
    } catch (const CorruptModelError&) {
      throw;
    } catch (const Error&) {
      throw CorruptModelError("bad merge row \"" + line + "\" in " + path);
    }
  }
  if (expect_line(in, path) != "end") {
    throw CorruptModelError("missing end marker in " + path);
  }
  if (merges.size() > budget) {
    throw CorruptModelError("merge list exceeds the stored budget in " + path);
  }
  return SubwordModel(kind, unit_kind, budget, std::move(map),
                      std::move(merges));
}

}  // namespace prontk
