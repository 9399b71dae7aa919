#include "prontk/dataset.hpp"

#include <fstream>
#include <istream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "prontk/normalize.hpp"
#include "prontk/utf8.hpp"

namespace prontk {

namespace {

constexpr std::size_t kChunkLines = 4096;

// Reads up to n lines; returns how many were read.
std::size_t read_chunk(std::istream& in, std::size_t n,
                       std::vector<std::string>& out) {
  out.clear();
  std::string line;
  while (out.size() < n && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out.size();
}

std::size_t drain_count(std::istream& in) {
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

struct PairOutcome {
  std::optional<DatasetEntry> entry;
  bool zh_ok = false;
  bool en_ok = false;
};

PairOutcome convert_one(const std::string& zh_line, const std::string& en_line,
                        const Lexicon& zh_lex, const Lexicon& en_lex,
                        const G2PProvider* zh_g2p, const G2PProvider* en_g2p,
                        const ConversionOptions& opts) {
  PairOutcome out;
  const TextSentence s = TextSentence::from_line(zh_line, Lang::Zh);
  const TextSentence t = TextSentence::from_line(en_line, Lang::En);
  const auto s_out = convert_sentence(s, zh_lex, zh_g2p, opts);
  const auto t_out = convert_sentence(t, en_lex, en_g2p, opts);
  out.zh_ok = s_out.ok() && !s.empty() && !s_out.sentence().empty();
  out.en_ok = t_out.ok() && !t.empty() && !t_out.sentence().empty();
  if (out.zh_ok && out.en_ok) {
    out.entry = DatasetEntry(s, t, s_out.sentence(), t_out.sentence());
  }
  return out;
}

}  // namespace

BuildReport build_dataset(std::istream& zh_in, std::istream& en_in,
                          const Lexicon& zh_lex, const Lexicon& en_lex,
                          const G2PProvider* zh_g2p, const G2PProvider* en_g2p,
                          const BuildOptions& opts,
                          const std::function<void(DatasetEntry&&)>& sink) {
  BuildReport report;
  std::vector<std::string> zh_lines, en_lines;
  const unsigned jobs = std::max(1u, opts.jobs);

  while (true) {
    const std::size_t nz = read_chunk(zh_in, kChunkLines, zh_lines);
    const std::size_t ne = read_chunk(en_in, kChunkLines, en_lines);
    if (nz != ne) {
      // Drain to report honest totals in the error.
      const std::size_t zh_total = report.total + nz + drain_count(zh_in);
      const std::size_t en_total = report.total + ne + drain_count(en_in);
      throw LineCountMismatchError(zh_total, en_total);
    }
    if (nz == 0) break;

    std::vector<PairOutcome> outcomes(nz);
    if (jobs == 1 || nz < 2) {
      for (std::size_t i = 0; i < nz; ++i) {
        outcomes[i] = convert_one(zh_lines[i], en_lines[i], zh_lex, en_lex,
                                  zh_g2p, en_g2p, opts.conversion);
      }
    } else {
      // Striped parallel map; each index is written by exactly one thread
      // and results are consumed in order afterwards.
      std::vector<std::thread> workers;
      std::exception_ptr first_error;
      std::mutex error_mu;
      for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < nz; i += jobs) {
              outcomes[i] = convert_one(zh_lines[i], en_lines[i], zh_lex,
                                        en_lex, zh_g2p, en_g2p,
                                        opts.conversion);
            }
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error) first_error = std::current_exception();
          }
        });
      }
      for (auto& t : workers) t.join();
      if (first_error) std::rethrow_exception(first_error);
    }

    for (auto& outcome : outcomes) {
      ++report.total;
      if (!outcome.zh_ok) ++report.rejected_zh;
      if (!outcome.en_ok) ++report.rejected_en;
      if (outcome.entry) {
        ++report.kept;
        sink(std::move(*outcome.entry));
      }
    }
  }
  return report;
}

std::vector<DatasetEntry> build_dataset_files(
    const std::string& zh_path, const std::string& en_path,
    const Lexicon& zh_lex, const Lexicon& en_lex, const G2PProvider* zh_g2p,
    const G2PProvider* en_g2p, const BuildOptions& opts, BuildReport* report) {
  std::ifstream zh_in(zh_path);
  if (!zh_in) throw IoError("cannot open input file: " + zh_path);
  std::ifstream en_in(en_path);
  if (!en_in) throw IoError("cannot open input file: " + en_path);
  std::vector<DatasetEntry> entries;
  BuildReport r =
      build_dataset(zh_in, en_in, zh_lex, en_lex, zh_g2p, en_g2p, opts,
                    [&](DatasetEntry&& e) { entries.push_back(std::move(e)); });
  if (report) *report = r;
  return entries;
}

std::string to_tsv(const DatasetEntry& entry) {
  return entry.s.render() + '\t' + entry.t.render() + '\t' +
         entry.s_p.render() + '\t' + entry.t_p.render();
}

DatasetEntry entry_from_tsv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(
        start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 4) {
    throw Error("dataset rows have 4 tab-separated fields, got " +
                std::to_string(fields.size()));
  }
  return DatasetEntry(TextSentence::from_line(fields[0], Lang::Zh),
                      TextSentence::from_line(fields[1], Lang::En),
                      PronSentence::parse_structural(fields[2], Lang::Zh),
                      PronSentence::parse_structural(fields[3], Lang::En));
}

std::string to_jsonl(const DatasetEntry& entry) {
  nlohmann::json j;
  j["s"] = entry.s.render();
  j["t"] = entry.t.render();
  j["s_p"] = entry.s_p.render();
  j["t_p"] = entry.t_p.render();
  return j.dump();
}

std::vector<DatasetEntry> read_tsv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::vector<DatasetEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      entries.push_back(entry_from_tsv(line));
    } catch (const Error& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return entries;
}

namespace {

// Unbiased bounded draw via mask-and-reject; mt19937_64 sequences are
// pinned by the standard, so permutations reproduce everywhere.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  while (true) {
    const std::uint64_t v = rng() & mask;
    if (v < bound) return v;
  }
}

}  // namespace

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  if (spec.dev_size + spec.test_size > n) {
    throw SpecTooLargeError("dev " + std::to_string(spec.dev_size) + " + test " +
                            std::to_string(spec.test_size) +
                            " exceed corpus size " + std::to_string(n));
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  SplitIndices out;
  out.dev.assign(perm.begin(), perm.begin() + spec.dev_size);
  out.test.assign(perm.begin() + spec.dev_size,
                  perm.begin() + spec.dev_size + spec.test_size);
  out.train.assign(perm.begin() + spec.dev_size + spec.test_size, perm.end());
  return out;
}

SplitResult<DatasetEntry> split_dataset(const std::vector<DatasetEntry>& entries,
                                        const SplitSpec& spec) {
  const SplitIndices idx = split_indices(entries.size(), spec);
  SplitResult<DatasetEntry> out;
  auto gather = [&](const std::vector<std::size_t>& indices,
                    std::vector<DatasetEntry>& into) {
    into.reserve(indices.size());
    for (std::size_t i : indices) into.push_back(entries[i]);
  };
  gather(idx.train, out.train);
  gather(idx.dev, out.dev);
  gather(idx.test, out.test);
  return out;
}

StatsReport corpus_stats(const std::vector<DatasetEntry>& entries,
                         const StatsOptions& opts) {
  StatsReport report;
  std::unordered_set<std::string> zh_words, en_words, pinyins, phonemes;
  std::set<char32_t> zh_chars;

  auto bucket = [&](const std::string& token, Lang lang) -> std::string {
    if (opts.collapse_numbers && is_number_token(token)) return "<num>";
    if (lang == Lang::En && opts.lowercase_en) return lowercase_ascii(token);
    return token;
  };

  for (const auto& entry : entries) {
    report.zh_total_tokens += entry.s.tokens().size();
    report.en_total_tokens += entry.t.tokens().size();
    for (const auto& token : entry.s.tokens()) {
      for (char32_t c : utf8::decode(token)) {
        if (utf8::is_cjk_ideograph(c)) zh_chars.insert(c);
      }
      if (!opts.count_punct_tokens && utf8::is_punct_only(token)) continue;
      zh_words.insert(bucket(token, Lang::Zh));
    }
    for (const auto& token : entry.t.tokens()) {
      if (!opts.count_punct_tokens && utf8::is_punct_only(token)) continue;
      en_words.insert(bucket(token, Lang::En));
    }
    for (const auto& word : entry.s_p.words()) {
      for (const auto& unit : word.units()) pinyins.insert(unit.value);
    }
    for (const auto& word : entry.t_p.words()) {
      for (const auto& unit : word.units()) phonemes.insert(unit.value);
    }
  }
  report.zh_distinct_words = zh_words.size();
  report.en_distinct_words = en_words.size();
  report.distinct_pinyins = pinyins.size();
  report.distinct_phonemes = phonemes.size();
  report.distinct_zh_chars = zh_chars.size();
  return report;
}

std::string StatsReport::to_json() const {
  nlohmann::json j;
  j["zh_distinct_words"] = zh_distinct_words;
  j["en_distinct_words"] = en_distinct_words;
  j["zh_total_tokens"] = zh_total_tokens;
  j["en_total_tokens"] = en_total_tokens;
  j["distinct_pinyins"] = distinct_pinyins;
  j["distinct_phonemes"] = distinct_phonemes;
  j["distinct_zh_chars"] = distinct_zh_chars;
  return j.dump();
}

}  // namespace prontk
