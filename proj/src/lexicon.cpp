#include "prontk/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace prontk {

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto sep = line.find('\t', start);
    fields.push_back(line.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start));
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return fields;
}

// "WORD(2)" -> "WORD"; the alternate index itself is unused because
// alternates fold into the same entry in file order.
std::string strip_alternate_suffix(const std::string& word) {
  if (word.size() >= 3 && word.back() == ')') {
    const auto open = word.rfind('(');
    if (open != std::string::npos && open > 0) {
      bool digits = true;
      for (std::size_t i = open + 1; i + 1 < word.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(word[i]))) digits = false;
      }
      if (digits && open + 2 <= word.size()) return word.substr(0, open);
    }
  }
  return word;
}

// CMU-style phoneme token: uppercase with optional stress digit ("AH0").
std::string normalize_phoneme_token(const std::string& token) {
  std::string out = lowercase_ascii(token);
  while (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back()))) {
    out.pop_back();
  }
  return out;
}

struct LineSink {
  Lexicon& lex;
  LexiconLoadReport& report;
  LoadMode mode;
  const std::string& path;

  // Runs the parser for one line; in lenient mode a failure only bumps the
  // skip counter.
  template <typename Fn>
  void feed(std::size_t line_no, Fn&& parse_line) {
    try {
      parse_line();
    } catch (const Error& e) {
      if (mode == LoadMode::Strict) {
        throw ParseError(path, line_no, e.what());
      }
      ++report.skipped_lines;
    }
  }
};

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  return in;
}

}  // namespace

std::string lowercase_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

Lexicon::Lexicon(Lang lang) : lang_(lang) {}

const LexiconEntry* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<PronWord> Lexicon::lookup_first(std::string_view word) const {
  const auto* entry = find(word);
  if (!entry) return std::nullopt;
  return entry->pronunciations.front();
}

std::optional<PronWord> Lexicon::lookup_random(std::string_view word,
                                               std::uint64_t seed) const {
  const auto* entry = find(word);
  if (!entry) return std::nullopt;
  // Seed mixed with the word so the choice is stable per (seed, word).
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : word) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::mt19937_64 rng(h);
  std::uniform_int_distribution<std::size_t> pick(
      0, entry->pronunciations.size() - 1);
  return entry->pronunciations[pick(rng)];
}

void Lexicon::add(const std::string& word, PronWord pron) {
  if (pron.kind() != unit_kind()) {
    throw WrongKindError("pronunciation kind does not match lexicon language");
  }
  auto [it, inserted] = entries_.try_emplace(word, LexiconEntry{word, {}});
  it->second.pronunciations.push_back(std::move(pron));
}

std::string Lexicon::canonical_dump() const {
  std::vector<const LexiconEntry*> sorted;
  sorted.reserve(entries_.size());
  for (const auto& [_, entry] : entries_) sorted.push_back(&entry);
  std::sort(sorted.begin(), sorted.end(),
            [](const LexiconEntry* a, const LexiconEntry* b) {
              return a->word < b->word;
            });
  std::string out;
  for (const auto* entry : sorted) {
    out += entry->word;
    for (const auto& p : entry->pronunciations) {
      out += '\t';
      out += p.render();
    }
    out += '\n';
  }
  return out;
}

Lexicon load_lexicon(const std::string& path, Lang lang, LexiconFormat format,
                     const LexiconLoadOptions& opts,
                     LexiconLoadReport* report) {
  if (format == LexiconFormat::DaCiDian) {
    throw Error("the DaCiDian format takes two files; use load_dacidian");
  }
  const PhonemeInventory& inv =
      opts.inventory ? *opts.inventory : PhonemeInventory::arpabet();
  Lexicon lex(lang);
  LexiconLoadReport local;
  LineSink sink{lex, local, opts.mode, path};

  auto in = open_or_throw(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;

    if (format == LexiconFormat::SimpleTSV) {
      sink.feed(line_no, [&] {
        auto fields = split_tabs(line);
        if (fields.size() < 2 || fields[0].empty()) {
          throw Error("expected word<TAB>pron...");
        }
        for (std::size_t i = 1; i < fields.size(); ++i) {
          lex.add(fields[0],
                  PronWord::parse(fields[i], unit_kind_for(lang), inv));
          ++local.pronunciations;
        }
      });
    } else {  // Voxforge
      sink.feed(line_no, [&] {
        auto tokens = split_ws(line);
        if (tokens.size() < 2) throw Error("expected WORD PH1 PH2 ...");
        std::string word =
            lowercase_ascii(strip_alternate_suffix(tokens[0]));
        std::size_t first = 1;
        // VoxForgeDict carries the headword twice: WORD [WORD] PH1 ...
        if (tokens[1].size() >= 2 && tokens[1].front() == '[' &&
            tokens[1].back() == ']') {
          first = 2;
        }
        if (first >= tokens.size()) throw Error("line has no phonemes");
        std::vector<PronUnit> units;
        for (std::size_t i = first; i < tokens.size(); ++i) {
          units.push_back(
              PronUnit::phoneme(normalize_phoneme_token(tokens[i]), inv));
        }
        lex.add(word, PronWord(std::move(units)));
        ++local.pronunciations;
      });
    }
  }
  local.entries = lex.size();
  if (report) *report = local;
  return lex;
}

Lexicon load_dacidian(const std::string& word_to_ids_path,
                      const std::string& ids_to_pinyin_path,
                      const LexiconLoadOptions& opts,
                      LexiconLoadReport* report) {
  Lexicon lex(Lang::Zh);
  LexiconLoadReport local;

  std::unordered_map<std::string, std::string> pinyin_by_id;
  {
    auto in = open_or_throw(ids_to_pinyin_path);
    std::string line;
    std::size_t line_no = 0;
    LineSink sink{lex, local, opts.mode, ids_to_pinyin_path};
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_comment_or_blank(line)) continue;
      sink.feed(line_no, [&] {
        auto tokens = split_ws(line);
        if (tokens.size() != 2) throw Error("expected id<WS>pinyin");
        if (!is_valid_pinyin(tokens[1])) throw InvalidUnitError(tokens[1]);
        pinyin_by_id[tokens[0]] = tokens[1];
      });
    }
  }

  auto in = open_or_throw(word_to_ids_path);
  std::string line;
  std::size_t line_no = 0;
  LineSink sink{lex, local, opts.mode, word_to_ids_path};
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    sink.feed(line_no, [&] {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) {
        throw Error("expected word<TAB>ids[;ids...]");
      }
      const std::string word = line.substr(0, tab);
      std::stringstream alternates(line.substr(tab + 1));
      std::string alt;
      bool any = false;
      while (std::getline(alternates, alt, ';')) {
        auto ids = split_ws(alt);
        if (ids.empty()) continue;
        std::vector<PronUnit> units;
        for (const auto& id : ids) {
          auto it = pinyin_by_id.find(id);
          if (it == pinyin_by_id.end()) {
            throw Error("unmapped pronunciation id \"" + id + "\"");
          }
          units.push_back(PronUnit::pinyin(it->second));
        }
        lex.add(word, PronWord(std::move(units)));
        ++local.pronunciations;
        any = true;
      }
      if (!any) throw Error("entry has no pronunciations");
    });
  }
  local.entries = lex.size();
  if (report) *report = local;
  return lex;
}

}  // namespace prontk
