#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "prontk/convert.hpp"

namespace prontk {

struct BuildReport {
  std::size_t total = 0;        // line pairs read
  std::size_t kept = 0;         // entries emitted
  std::size_t rejected_zh = 0;  // pairs whose Chinese side failed or was empty
  std::size_t rejected_en = 0;  // same for English; a pair can count in both
};

struct BuildOptions {
  ConversionOptions conversion;
  unsigned jobs = 1;  // parallel conversion width; output order is fixed
};

// Streams two line-aligned files through convert_pair, emitting entries in
// input order. Raises LineCountMismatchError when the files disagree in
// length.
BuildReport build_dataset(std::istream& zh_in, std::istream& en_in,
                          const Lexicon& zh_lex, const Lexicon& en_lex,
                          const G2PProvider* zh_g2p, const G2PProvider* en_g2p,
                          const BuildOptions& opts,
                          const std::function<void(DatasetEntry&&)>& sink);

std::vector<DatasetEntry> build_dataset_files(
    const std::string& zh_path, const std::string& en_path,
    const Lexicon& zh_lex, const Lexicon& en_lex, const G2PProvider* zh_g2p,
    const G2PProvider* en_g2p, const BuildOptions& opts, BuildReport* report);

// Four tab-separated columns (s, t, s_p, t_p), one entry per line;
// pronunciation fields use the structural wire format.
std::string to_tsv(const DatasetEntry& entry);
DatasetEntry entry_from_tsv(const std::string& line);
std::string to_jsonl(const DatasetEntry& entry);

std::vector<DatasetEntry> read_tsv_file(const std::string& path);

struct SplitSpec {
  std::size_t dev_size = 0;
  std::size_t test_size = 0;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev;
  std::vector<std::size_t> test;
};

// Seeded Fisher-Yates permutation of 0..n-1; dev is drawn first, test next,
// train is the remainder, each in permuted order. The shuffle uses its own
// bounded draw so the result is identical across platforms.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

template <typename T>
struct SplitResult {
  std::vector<T> train;
  std::vector<T> dev;
  std::vector<T> test;
};

SplitResult<DatasetEntry> split_dataset(const std::vector<DatasetEntry>& entries,
                                        const SplitSpec& spec);

struct StatsOptions {
  bool count_punct_tokens = false;  // punctuation-only tokens in distinct sets
  bool collapse_numbers = true;     // numeric tokens share one bucket
  bool lowercase_en = true;
};

struct StatsReport {
  std::size_t zh_distinct_words = 0;
  std::size_t en_distinct_words = 0;
  std::size_t zh_total_tokens = 0;
  std::size_t en_total_tokens = 0;
  std::size_t distinct_pinyins = 0;
  std::size_t distinct_phonemes = 0;
  std::size_t distinct_zh_chars = 0;  // CJK ideographs in the source text

  std::string to_json() const;
};

StatsReport corpus_stats(const std::vector<DatasetEntry>& entries,
                         const StatsOptions& opts = {});

}  // namespace prontk
