#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "prontk/dataset.hpp"

using namespace prontk;

namespace {

const std::string kFixtures = PRONTK_FIXTURE_DIR;

const Lexicon& zh_lexicon() {
  static const Lexicon lex = load_lexicon(
      kFixtures + "/table1_lexicon_zh.tsv", Lang::Zh, LexiconFormat::SimpleTSV);
  return lex;
}

const Lexicon& en_lexicon() {
  static const Lexicon lex = load_lexicon(
      kFixtures + "/table1_lexicon_en.tsv", Lang::En, LexiconFormat::SimpleTSV);
  return lex;
}

std::vector<DatasetEntry> build_table1(BuildReport* report,
                                       unsigned jobs = 1) {
  BuildOptions opts;
  opts.jobs = jobs;
  return build_dataset_files(kFixtures + "/table1.zh", kFixtures + "/table1.en",
                             zh_lexicon(), en_lexicon(), nullptr, nullptr,
                             opts, report);
}

// Synthetic entries for split/stats scale tests.
std::vector<DatasetEntry> synthetic_entries(std::size_t n) {
  std::vector<DatasetEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string tag = std::to_string(i);
    entries.emplace_back(
        TextSentence(Lang::Zh, {"鱼", "句" + tag}),
        TextSentence(Lang::En, {"fish", "line" + tag}),
        PronSentence::parse("yu_2 ju_4", Lang::Zh),
        PronSentence::parse("f-ih-sh l-ay-n", Lang::En));
  }
  return entries;
}

}  // namespace

TEST_CASE("the two-line golden fixture reproduces both entries exactly") {
  BuildReport report;
  const auto entries = build_table1(&report);
  CHECK(report.total == 2);
  CHECK(report.kept == 2);
  CHECK(report.rejected_zh == 0);
  CHECK(report.rejected_en == 0);
  REQUIRE(entries.size() == 2);

  CHECK(entries[0].s.render() == "2005 年 1 月 31 日");
  CHECK(entries[0].t.render() == "31 January 2005");
  CHECK(entries[0].s_p.render() ==
        "er_4-ling_2-ling_2-wu_3 nian_2 yi_1 yue_4 san_1-shi_2-yi_1 ri_4");
  CHECK(entries[0].t_p.render() ==
        "th-er-d-iy-w-ah-n jh-ae-n-y-uw-eh-r-iy "
        "t-uw-th-aw-z-ah-n-d-ah-n-d-f-ay-v");

  CHECK(entries[1].s.render() == "晚餐 想 吃 牛肉 、 鸡肉 或是 鱼 ?");
  CHECK(entries[1].t.render() ==
        "which would you like for dinner , beef , chicken or fish ?");
  CHECK(entries[1].s_p.render() ==
        "wan_3-can_1 xiang_3 chi_1 niu_2-rou_4 ji_1-rou_4 huo_4-shi_4 yu_2");
  CHECK(entries[1].t_p.render() ==
        "w-ih-ch w-uh-d y-uw l-ay-k f-ao-r d-ih-n-er b-iy-f ch-ih-k-ah-n ao-r "
        "f-ih-sh");
}

TEST_CASE("parallel jobs reproduce the single-threaded build byte for byte") {
  BuildReport serial_report, parallel_report;
  const auto serial = build_table1(&serial_report, 1);
  const auto parallel = build_table1(&parallel_report, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(to_tsv(serial[i]) == to_tsv(parallel[i]));
  }
  CHECK(serial_report.kept == parallel_report.kept);
}

TEST_CASE("an unpronounceable word drops only its pair and is counted") {
  std::istringstream zh("晚餐 想\n晚餐 鱼\n");
  std::istringstream en("dinner fish\nqwzrt fish\n");
  std::vector<DatasetEntry> kept;
  const auto report = build_dataset(
      zh, en, zh_lexicon(), en_lexicon(), nullptr, nullptr, {},
      [&](DatasetEntry&& e) { kept.push_back(std::move(e)); });
  CHECK(report.total == 2);
  CHECK(report.kept == 1);
  CHECK(report.rejected_zh == 0);
  CHECK(report.rejected_en == 1);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].s.render() == "晚餐 想");
}

TEST_CASE("line-count mismatch is a hard error with honest totals") {
  std::istringstream zh("鱼\n鱼\n鱼\n");
  std::istringstream en("fish\nfish\n");
  CHECK_THROWS_AS(build_dataset(zh, en, zh_lexicon(), en_lexicon(), nullptr,
                                nullptr, {}, [](DatasetEntry&&) {}),
                  LineCountMismatchError);
}

TEST_CASE("empty and punctuation-only lines are rejected per side") {
  std::istringstream zh("鱼\n。\n\n");
  std::istringstream en("fish\nfish\nfish\n");
  std::vector<DatasetEntry> kept;
  const auto report = build_dataset(
      zh, en, zh_lexicon(), en_lexicon(), nullptr, nullptr, {},
      [&](DatasetEntry&& e) { kept.push_back(std::move(e)); });
  CHECK(report.total == 3);
  CHECK(report.kept == 1);
  CHECK(report.rejected_zh == 2);
}

TEST_CASE("TSV and JSONL round the quadruple through text") {
  BuildReport report;
  const auto entries = build_table1(&report);
  const auto line = to_tsv(entries[0]);
  const auto parsed = entry_from_tsv(line);
  CHECK(parsed.s.render() == entries[0].s.render());
  CHECK(parsed.t.render() == entries[0].t.render());
  CHECK(parsed.s_p.render() == entries[0].s_p.render());
  CHECK(parsed.t_p.render() == entries[0].t_p.render());

  const auto json = to_jsonl(entries[0]);
  CHECK(json.find("\"s\":") != std::string::npos);
  CHECK(json.find("\"s_p\":") != std::string::npos);
  CHECK(json.find("\"t_p\":") != std::string::npos);

  CHECK_THROWS_AS(entry_from_tsv("only\tthree\tfields"), Error);
}

TEST_CASE("split: sizes, disjointness, and union on the worked example") {
  const auto entries = synthetic_entries(10);
  const SplitSpec spec{2, 2, 42};
  const auto split = split_dataset(entries, spec);
  CHECK(split.train.size() == 6);
  CHECK(split.dev.size() == 2);
  CHECK(split.test.size() == 2);

  const auto idx = split_indices(10, spec);
  std::set<std::size_t> seen;
  for (const auto* part : {&idx.train, &idx.dev, &idx.test}) {
    for (std::size_t i : *part) {
      CHECK(seen.insert(i).second);  // disjoint
      CHECK(i < 10);
    }
  }
  CHECK(seen.size() == 10);  // union-complete
}

TEST_CASE("the same seed reproduces the same assignment") {
  const auto a = split_indices(1000, {100, 100, 7});
  const auto b = split_indices(1000, {100, 100, 7});
  CHECK(a.train == b.train);
  CHECK(a.dev == b.dev);
  CHECK(a.test == b.test);

  const auto c = split_indices(1000, {100, 100, 8});
  CHECK(a.dev != c.dev);
}

TEST_CASE("oversized specs are refused") {
  CHECK_THROWS_AS(split_indices(10, {8, 8, 1}), SpecTooLargeError);
  CHECK_NOTHROW(split_indices(10, {5, 5, 1}));
}

TEST_CASE("stats on the golden fixture match the frozen manual count") {
  BuildReport report;
  const auto entries = build_table1(&report);
  const auto stats = corpus_stats(entries);
  // Manual recount over the two entries: 年 月 日 晚餐 想 吃 牛肉 鸡肉 或是 鱼
  // plus the shared numeral bucket.
  CHECK(stats.zh_distinct_words == 11);
  // january which would you like for dinner beef chicken or fish + bucket.
  CHECK(stats.en_distinct_words == 12);
  CHECK(stats.zh_total_tokens == 15);
  CHECK(stats.en_total_tokens == 16);
  CHECK(stats.distinct_pinyins == 19);
  CHECK(stats.distinct_phonemes == 27);
  CHECK(stats.distinct_zh_chars == 13);
}

TEST_CASE("stats options expose the raw counting modes") {
  BuildReport report;
  const auto entries = build_table1(&report);
  StatsOptions raw;
  raw.count_punct_tokens = true;
  raw.collapse_numbers = false;
  const auto stats = corpus_stats(entries, raw);
  // 、 ? , join the distinct sets; 2005 1 31 count separately.
  CHECK(stats.zh_distinct_words == 15);
  CHECK(stats.en_distinct_words == 15);
}

TEST_CASE("stats: empty dataset is all zeros, duplicates double totals only") {
  const auto zero = corpus_stats({});
  CHECK(zero.zh_distinct_words == 0);
  CHECK(zero.en_distinct_words == 0);
  CHECK(zero.zh_total_tokens == 0);
  CHECK(zero.distinct_pinyins == 0);
  CHECK(zero.distinct_phonemes == 0);
  CHECK(zero.distinct_zh_chars == 0);

  BuildReport report;
  auto entries = build_table1(&report);
  const auto once = corpus_stats(entries);
  auto doubled = entries;
  doubled.insert(doubled.end(), entries.begin(), entries.end());
  const auto twice = corpus_stats(doubled);
  CHECK(twice.zh_distinct_words == once.zh_distinct_words);
  CHECK(twice.en_distinct_words == once.en_distinct_words);
  CHECK(twice.zh_total_tokens == 2 * once.zh_total_tokens);
  CHECK(twice.en_total_tokens == 2 * once.en_total_tokens);
}

TEST_CASE("stats stay internally consistent on synthetic data") {
  const auto entries = synthetic_entries(500);
  const auto stats = corpus_stats(entries);
  CHECK(stats.zh_distinct_words <= stats.zh_total_tokens);
  CHECK(stats.en_distinct_words <= stats.en_total_tokens);
  CHECK(stats.distinct_phonemes <= 39);
}

TEST_CASE("dataset entries refuse empty or misordered fields") {
  CHECK_THROWS_AS(
      DatasetEntry(TextSentence(Lang::Zh, {}),
                   TextSentence(Lang::En, {"fish"}),
                   PronSentence::parse("yu_2", Lang::Zh),
                   PronSentence::parse("f-ih-sh", Lang::En)),
      Error);
  CHECK_THROWS_AS(
      DatasetEntry(TextSentence(Lang::En, {"fish"}),
                   TextSentence(Lang::En, {"fish"}),
                   PronSentence::parse("yu_2", Lang::Zh),
                   PronSentence::parse("f-ih-sh", Lang::En)),
      Error);
}
