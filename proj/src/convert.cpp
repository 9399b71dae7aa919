#include "prontk/convert.hpp"

#include <unistd.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "prontk/utf8.hpp"

namespace prontk {

namespace {

bool all_ascii_letters(const std::string& word) {
  if (word.empty()) return false;
  for (unsigned char c : word) {
    if (!std::isalpha(c)) return false;
  }
  return true;
}

struct LetterRule {
  std::string_view cluster;
  std::vector<std::string_view> phonemes;
};

// Longest match first; single letters close the table so every alphabetic
// word gets some pronunciation.
const std::vector<LetterRule>& letter_rules() {
  static const std::vector<LetterRule> rules = {
      {"tion", {"sh", "ah", "n"}},
      {"igh", {"ay"}},
      {"ch", {"ch"}},
      {"sh", {"sh"}},
      {"th", {"th"}},
      {"ph", {"f"}},
      {"wh", {"w"}},
      {"ck", {"k"}},
      {"ng", {"ng"}},
      {"qu", {"k", "w"}},
      {"ee", {"iy"}},
      {"ea", {"iy"}},
      {"oo", {"uw"}},
      {"ai", {"ey"}},
      {"ay", {"ey"}},
      {"oy", {"oy"}},
      {"oi", {"oy"}},
      {"ou", {"aw"}},
      {"ow", {"ow"}},
      {"au", {"ao"}},
      {"ar", {"aa", "r"}},
      {"er", {"er"}},
      {"ir", {"er"}},
      {"ur", {"er"}},
      {"or", {"ao", "r"}},
      {"a", {"ae"}},
      {"b", {"b"}},
      {"c", {"k"}},
      {"d", {"d"}},
      {"e", {"eh"}},
      {"f", {"f"}},
      {"g", {"g"}},
      {"h", {"hh"}},
      {"i", {"ih"}},
      {"j", {"jh"}},
      {"k", {"k"}},
      {"l", {"l"}},
      {"m", {"m"}},
      {"n", {"n"}},
      {"o", {"aa"}},
      {"p", {"p"}},
      {"q", {"k"}},
      {"r", {"r"}},
      {"s", {"s"}},
      {"t", {"t"}},
      {"u", {"ah"}},
      {"v", {"v"}},
      {"w", {"w"}},
      {"x", {"k", "s"}},
      {"y", {"y"}},
      {"z", {"z"}},
  };
  return rules;
}

}  // namespace

std::optional<PronWord> rule_g2p_en(const std::string& word) {
  if (!all_ascii_letters(word)) return std::nullopt;
  const std::string lower = lowercase_ascii(word);
  std::vector<PronUnit> units;
  std::size_t i = 0;
  while (i < lower.size()) {
    const std::string_view rest = std::string_view(lower).substr(i);
    for (const auto& rule : letter_rules()) {
      if (rest.substr(0, rule.cluster.size()) == rule.cluster) {
        for (auto p : rule.phonemes) {
          units.push_back(PronUnit::phoneme(std::string(p)));
        }
        i += rule.cluster.size();
        break;
      }
    }
  }
  return PronWord(std::move(units));
}

std::optional<PronWord> RuleG2PEn::pronounce(const std::string& word) const {
  return rule_g2p_en(word);
}

CharPinyinTable CharPinyinTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open character table: " + path);
  CharPinyinTable table;
  table.version_ = "unversioned";
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# zh-char-table ", 0) == 0) {
      table.version_ = line.substr(16);
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
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(
          start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2) {
      throw ParseError(path, line_no, "expected character<TAB>pinyin...");
    }
    try {
      for (std::size_t i = 1; i < fields.size(); ++i) {
        table.add(fields[0], fields[i]);
      }
    } catch (const Error& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return table;
}

void CharPinyinTable::add(std::string_view character, std::string pinyin) {
  const auto cps = utf8::decode(character);
  if (cps.size() != 1) {
    throw Error("character table keys must be single characters: \"" +
                std::string(character) + "\"");
  }
  if (!is_valid_pinyin(pinyin)) throw InvalidUnitError(pinyin);
  pinyins_by_char_[cps[0]].push_back(std::move(pinyin));
}

const std::vector<std::string>* CharPinyinTable::find(char32_t c) const {
  auto it = pinyins_by_char_.find(c);
  return it == pinyins_by_char_.end() ? nullptr : &it->second;
}

std::optional<PronWord> rule_g2p_zh(const std::string& word,
                                    const CharPinyinTable& table) {
  if (word.empty()) return std::nullopt;
  std::u32string cps;
  try {
    cps = utf8::decode(word);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::vector<PronUnit> units;
  for (char32_t c : cps) {
    const auto* alternatives = table.find(c);
    if (!alternatives) return std::nullopt;
    units.push_back(PronUnit::pinyin(alternatives->front()));
  }
  return PronWord(std::move(units));
}

std::optional<PronWord> RuleG2PZh::pronounce(const std::string& word) const {
  return rule_g2p_zh(word, table_);
}

struct ExternalG2P::Impl {
  std::string command;
  UnitKind kind;
  const PhonemeInventory* inv;
  mutable std::mutex mu;
  mutable std::unordered_map<std::string, std::optional<PronWord>> cache;
};

ExternalG2P::ExternalG2P(std::string command, UnitKind kind,
                         const PhonemeInventory* inv)
    : impl_(new Impl{std::move(command), kind,
                     inv ? inv : &PhonemeInventory::arpabet(), {}, {}}) {}

ExternalG2P::~ExternalG2P() = default;

std::optional<PronWord> ExternalG2P::pronounce(const std::string& word) const {
  std::lock_guard<std::mutex> lock(impl_->mu);
  auto hit = impl_->cache.find(word);
  if (hit != impl_->cache.end()) return hit->second;

  char in_path[] = "/tmp/prontk-g2p-in-XXXXXX";
  char out_path[] = "/tmp/prontk-g2p-out-XXXXXX";
  const int in_fd = mkstemp(in_path);
  const int out_fd = mkstemp(out_path);
  if (in_fd < 0 || out_fd < 0) throw IoError("cannot create G2P temp files");
  close(in_fd);
  close(out_fd);
  {
    std::ofstream in(in_path);
    in << word << '\n';
  }
  const std::string shell =
      impl_->command + " < " + in_path + " > " + std::string(out_path);
  const int rc = std::system(shell.c_str());
  std::optional<PronWord> result;
  if (rc == 0) {
    std::ifstream out(out_path);
    std::string line;
    std::getline(out, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) {
      result = PronWord::parse(line, impl_->kind, *impl_->inv);
    }
  }
  std::remove(in_path);
  std::remove(out_path);
  if (rc != 0) {
    throw IoError("external G2P command failed (exit " + std::to_string(rc) +
                  "): " + impl_->command);
  }
  impl_->cache.emplace(word, result);
  return result;
}

namespace {

struct TokenResolver {
  const Lexicon& lex;
  const G2PProvider* g2p;
  const ConversionOptions& opts;
  const ZhNumberTable& number_table;
  const PhonemeInventory& inv;

  std::string lookup_key(const std::string& token) const {
    return lex.lang() == Lang::En ? lowercase_ascii(token) : token;
  }

  // One word of an English number expansion: lexicon first, then G2P.
  std::optional<PronWord> resolve_en_expansion_word(const std::string& word) const {
    if (auto hit = lex.lookup_first(word)) return hit;
    if (g2p) return g2p->pronounce(word);
    return std::nullopt;
  }

  std::optional<PronWord> en_number_pron(const std::string& token) const {
    std::string_view v = token;
    bool negative = false;
    if (!v.empty() && v.front() == '-') {
      negative = true;
      v.remove_prefix(1);
    }
    const auto dot = v.find('.');
    const auto int_digits = dot == std::string_view::npos ? v : v.substr(0, dot);
    std::string words;
    try {
      if (opts.number_policy == NumberPolicy::DigitWise) {
        if (negative) words = "minus";
        for (char c : int_digits) {
          if (!words.empty()) words += ' ';
          words += en_int_to_words(static_cast<long long>(c - '0'));
        }
      } else {
        words = en_int_to_words(int_digits, negative);
      }
      if (dot != std::string_view::npos) {
        words += " point";
        for (char c : v.substr(dot + 1)) {
          words += ' ';
          words += en_int_to_words(static_cast<long long>(c - '0'));
        }
      }
    } catch (const Error&) {
      return std::nullopt;  // overflow; the G2P fallback may still fire
    }
    std::vector<PronUnit> units;
    for (const auto& w : split_ws(words)) {
      auto pron = resolve_en_expansion_word(w);
      if (!pron) return std::nullopt;
      for (const auto& u : pron->units()) units.push_back(u);
    }
    if (units.empty()) return std::nullopt;
    return PronWord(std::move(units));
  }

  std::optional<PronWord> zh_number_pron(const std::string& token,
                                         bool next_is_year) const {
    NumberReadingMode mode = NumberReadingMode::Magnitude;
    if (opts.number_policy == NumberPolicy::DigitWise ||
        (opts.number_policy == NumberPolicy::Auto && next_is_year)) {
      mode = NumberReadingMode::DigitWise;
    }
    std::string chars;
    try {
      chars = zh_decimal_to_chinese(token, mode);
    } catch (const Error&) {
      return std::nullopt;
    }
    std::u32string cps = utf8::decode(chars);
    std::vector<PronUnit> units;
    if (!cps.empty() && cps.front() == U'负') {
      // 负 is pronounced through the lexicon (fu_4 in practice), not the
      // numeral table.
      auto fu = lex.lookup_first("负");
      if (!fu && g2p) fu = g2p->pronounce("负");
      if (!fu) return std::nullopt;
      for (const auto& u : fu->units()) units.push_back(u);
      cps.erase(cps.begin());
    }
    try {
      const PronWord rest = chinese_numeral_to_pinyin(utf8::encode(cps),
                                                      number_table);
      for (const auto& u : rest.units()) units.push_back(u);
    } catch (const Error&) {
      return std::nullopt;
    }
    return PronWord(std::move(units));
  }

  std::optional<PronWord> resolve(const std::string& token,
                                  bool next_is_year) const {
    if (auto hit = lex.lookup_first(lookup_key(token))) return hit;
    if (is_number_token(token)) {
      auto pron = lex.lang() == Lang::Zh ? zh_number_pron(token, next_is_year)
                                         : en_number_pron(token);
      if (pron) return pron;
    }
    if (g2p) {
      if (auto pron = g2p->pronounce(lookup_key(token))) return pron;
    }
    if (lex.lang() == Lang::Zh && opts.latin_fallback &&
        all_ascii_letters(token)) {
      if (auto pron = opts.latin_fallback->pronounce(token)) return pron;
    }
    return std::nullopt;
  }
};

}  // namespace

ConversionOutcome convert_sentence(const TextSentence& text, const Lexicon& lex,
                                   const G2PProvider* g2p,
                                   const ConversionOptions& opts) {
  if (text.lang() != lex.lang()) {
    throw WrongKindError("sentence language does not match the lexicon");
  }
  const TokenResolver resolver{
      lex, g2p, opts,
      opts.zh_number_table ? *opts.zh_number_table : ZhNumberTable::standard(),
      opts.inventory ? *opts.inventory : PhonemeInventory::arpabet()};

  const TextSentence normalized = apply_punct_rules(text);
  PronSentence out(text.lang());
  const auto& tokens = normalized.tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool next_is_year = i + 1 < tokens.size() && tokens[i + 1] == "年";
    auto pron = resolver.resolve(tokens[i], next_is_year);
    if (pron) {
      out.push_back(std::move(*pron));
    } else if (opts.on_missing == OnMissing::Reject) {
      return ConversionOutcome::reject(
          Rejection{tokens[i], RejectionReason::NoPronunciation});
    }
    // SkipWord drops the token.
  }
  return ConversionOutcome::success(std::move(out));
}

DatasetEntry::DatasetEntry(TextSentence s_, TextSentence t_, PronSentence sp_,
                           PronSentence tp_)
    : s(std::move(s_)), t(std::move(t_)), s_p(std::move(sp_)),
      t_p(std::move(tp_)) {
  if (s.empty() || t.empty() || s_p.empty() || t_p.empty()) {
    throw Error("dataset entries must have all four fields nonempty");
  }
  if (s.lang() != Lang::Zh || t.lang() != Lang::En ||
      s_p.lang() != Lang::Zh || t_p.lang() != Lang::En) {
    throw Error("dataset entry languages out of order; expected (zh, en)");
  }
}

std::optional<DatasetEntry> convert_pair(
    const TextSentence& s, const TextSentence& t, const Lexicon& zh_lex,
    const Lexicon& en_lex, const G2PProvider* zh_g2p, const G2PProvider* en_g2p,
    const ConversionOptions& opts) {
  const auto s_out = convert_sentence(s, zh_lex, zh_g2p, opts);
  if (!s_out.ok()) return std::nullopt;
  const auto t_out = convert_sentence(t, en_lex, en_g2p, opts);
  if (!t_out.ok()) return std::nullopt;
  if (s.empty() || t.empty() || s_out.sentence().empty() ||
      t_out.sentence().empty()) {
    return std::nullopt;
  }
  return DatasetEntry(s, t, s_out.sentence(), t_out.sentence());
}

}  // namespace prontk
