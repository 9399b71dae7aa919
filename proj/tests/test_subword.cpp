#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "prontk/subword.hpp"

using namespace prontk;

namespace {

PronSentence en_sentence(const std::vector<std::string>& words) {
  std::vector<PronWord> parsed;
  for (const auto& w : words) {
    parsed.push_back(PronWord::parse(w, UnitKind::Phoneme));
  }
  return PronSentence(Lang::En, std::move(parsed));
}

PronSentence zh_sentence(const std::vector<std::string>& words) {
  std::vector<PronWord> parsed;
  for (const auto& w : words) {
    parsed.push_back(PronWord::parse(w, UnitKind::Pinyin));
  }
  return PronSentence(Lang::Zh, std::move(parsed));
}

std::vector<PronSentence> repeat_words(
    const std::vector<std::pair<std::string, int>>& words_with_counts) {
  std::vector<PronSentence> corpus;
  for (const auto& [word, count] : words_with_counts) {
    for (int i = 0; i < count; ++i) corpus.push_back(en_sentence({word}));
  }
  return corpus;
}

std::vector<std::string> rendered_merges(const SubwordModel& model) {
  std::vector<std::string> out;
  for (const auto& rule : model.merges()) {
    out.push_back(model.render_symbol(rule.left) + " " +
                  model.render_symbol(rule.right));
  }
  return out;
}

// Random phoneme corpus; every word nonempty, sizes bounded for the oracle.
std::vector<PronSentence> random_corpus(std::mt19937_64& rng,
                                        std::size_t max_words,
                                        std::size_t max_word_len) {
  std::vector<PronSentence> corpus;
  const std::size_t sentences = 1 + rng() % 5;
  std::size_t total_words = 1 + rng() % max_words;
  for (std::size_t s = 0; s < sentences && total_words > 0; ++s) {
    std::vector<std::string> words;
    const std::size_t n =
        s + 1 == sentences ? total_words : 1 + rng() % total_words;
    for (std::size_t w = 0; w < n; ++w) {
      std::string word = oracles::random_phoneme(rng);
      const std::size_t len = 1 + rng() % max_word_len;
      for (std::size_t k = 1; k < len; ++k) {
        word += '-';
        word += oracles::random_phoneme(rng);
      }
      words.push_back(word);
    }
    total_words -= n;
    corpus.push_back(en_sentence(words));
  }
  return corpus;
}

oracles::OracleCorpus to_oracle(const std::vector<PronSentence>& corpus) {
  oracles::OracleCorpus out;
  for (const auto& sentence : corpus) {
    for (const auto& word : sentence.words()) {
      std::vector<std::string> symbols;
      for (const auto& unit : word.units()) symbols.push_back(unit.value);
      out.words.push_back(std::move(symbols));
      out.counts.push_back(1);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("pseudo map assigns sorted units to consecutive code points") {
  const auto map = build_pseudo_map({en_sentence({"th-ah", "ah"})});
  REQUIRE(map.size() == 2);
  CHECK(*map.to_pseudo("ah") == char32_t{0xE000});
  CHECK(*map.to_pseudo("th") == char32_t{0xE001});
  CHECK(*map.to_unit(0xE000) == "ah");
  CHECK(*map.to_unit(0xE001) == "th");
  CHECK_FALSE(map.to_pseudo("zz").has_value());
  CHECK(map.to_unit(0xE002) == nullptr);
}

TEST_CASE("1485 distinct pinyins fit the reserved block") {
  std::vector<PronWord> words;
  int made = 0;
  for (int base = 0; made < 1485; ++base) {
    for (int tone = 1; tone <= 5 && made < 1485; ++tone) {
      std::string unit = "py";
      int b = base;
      do {
        unit += static_cast<char>('a' + b % 26);
        b /= 26;
      } while (b > 0);
      unit += "_" + std::to_string(tone);
      words.push_back(PronWord::parse(unit, UnitKind::Pinyin));
      ++made;
    }
  }
  const auto map =
      build_pseudo_map({PronSentence(Lang::Zh, std::move(words))});
  CHECK(map.size() == 1485);
}

TEST_CASE("more units than the block raises AlphabetOverflow") {
  std::vector<std::string> units;
  for (std::size_t i = 0; i <= PseudoCharMap::kBlockSize; ++i) {
    units.push_back("u" + std::to_string(i));
  }
  CHECK_THROWS_AS(PseudoCharMap(std::move(units)), AlphabetOverflowError);
}

TEST_CASE("empty corpus gives an empty map and a mergeless model") {
  const auto map = build_pseudo_map({});
  CHECK(map.size() == 0);
  const auto model = learn_bpe({}, 5);
  CHECK(model.merges().empty());
  CHECK(model.stopped_early());
}

TEST_CASE("plain BPE learns the frequency-ordered merges") {
  // (l, ay) appears 5 times, (ay, k) 3 times.
  const auto corpus = repeat_words({{"l-ay-k", 3}, {"l-ay", 2}});

  const auto one = learn_bpe(corpus, 1);
  CHECK(rendered_merges(one) == std::vector<std::string>{"l ay"});

  const auto two = learn_bpe(corpus, 2);
  CHECK(rendered_merges(two) == std::vector<std::string>{"l ay", "l-ay k"});

  const auto none = learn_bpe(corpus, 0);
  CHECK(none.merges().empty());
  CHECK_FALSE(none.stopped_early());
  CHECK(encode(none, en_sentence({"l-ay-k"})) ==
        std::vector<std::string>{"\xE2\x96\x81l", "ay", "k"});
}

TEST_CASE("merges never cross word boundaries") {
  std::vector<PronSentence> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(en_sentence({"l-ay", "k"}));
  const auto model = learn_bpe(corpus, 2);
  CHECK(rendered_merges(model) == std::vector<std::string>{"l ay"});
  CHECK(model.stopped_early());
}

TEST_CASE("syllable learner follows the worked example") {
  const auto corpus = repeat_words({{"k-ae-t", 2}, {"ae-t", 1}});
  const auto model = learn_syllables(corpus, 2);
  CHECK(rendered_merges(model) ==
        std::vector<std::string>{"ae t", "k ae-t"});
  // final symbols include the full k-ae-t
  CHECK(model.in_vocab("k-ae-t"));
}

TEST_CASE("vowel-vowel and vowel-less corpora learn nothing") {
  std::vector<PronSentence> vowels, consonants;
  for (int i = 0; i < 100; ++i) {
    vowels.push_back(en_sentence({"ay-ah"}));
    consonants.push_back(en_sentence({"s-t-r"}));
  }
  CHECK(learn_syllables(vowels, 5).merges().empty());
  CHECK(learn_syllables(consonants, 5).merges().empty());
}

TEST_CASE("syllable learning rejects pinyin corpora") {
  CHECK_THROWS_AS(learn_syllables({zh_sentence({"ni_3-hao_3"})}, 3),
                  WrongKindError);
}

TEST_CASE("every syllable-model symbol carries exactly one vowel") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 120; ++trial) {
    const auto corpus = random_corpus(rng, 40, 8);
    const auto model = learn_syllables(corpus, 1 + rng() % 20);
    for (const auto& rule : model.merges()) {
      const auto result = PronWord::parse(model.render_symbol(rule.result()),
                                          UnitKind::Phoneme);
      CHECK(vowel_count(result) == 1);
    }
  }
}

TEST_CASE("learn_bpe equals the brute-force reference rule for rule") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const auto corpus = random_corpus(rng, 50, 6);
    const std::size_t m = rng() % 21;
    const auto model = learn_bpe(corpus, m);
    const auto expected = oracles::naive_bpe(to_oracle(corpus), m, false);
    const auto got = rendered_merges(model);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == expected[i].first + " " + expected[i].second);
    }
  }
}

TEST_CASE("learn_syllables equals the constrained reference too") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const auto corpus = random_corpus(rng, 40, 6);
    const std::size_t m = rng() % 15;
    const auto model = learn_syllables(corpus, m);
    const auto expected = oracles::naive_bpe(to_oracle(corpus), m, true);
    const auto got = rendered_merges(model);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == expected[i].first + " " + expected[i].second);
    }
  }
}

TEST_CASE("encode applies merges in rank order") {
  const auto corpus = repeat_words({{"l-ay-k", 3}, {"l-ay", 2}});
  const auto model = learn_bpe(corpus, 2);
  CHECK(encode(model, en_sentence({"l-ay-k"})) ==
        std::vector<std::string>{"\xE2\x96\x81l-ay-k"});
  CHECK(encode(model, en_sentence({"w-uh-d"}), UnknownPolicy::Passthrough) ==
        std::vector<std::string>{"\xE2\x96\x81w", "uh", "d"});

  const auto zh_model = learn_bpe({zh_sentence({"ni_3-hao_3"})}, 1);
  CHECK(encode(zh_model, zh_sentence({"ni_3-hao_3"})) ==
        std::vector<std::string>{"\xE2\x96\x81ni_3-hao_3"});
}

TEST_CASE("encode under strict policy raises on unknown units") {
  const auto model = learn_bpe(repeat_words({{"l-ay", 1}}), 0);
  CHECK_THROWS_AS(
      encode(model, en_sentence({"w-uh-d"}), UnknownPolicy::Strict),
      UnknownUnitError);
}

TEST_CASE("decode inverts the worked encodings") {
  const auto corpus = repeat_words({{"l-ay-k", 3}, {"l-ay", 2}});
  const auto model = learn_bpe(corpus, 2);
  CHECK(decode(model, {"\xE2\x96\x81l-ay-k"}).render() == "l-ay-k");
  CHECK(decode(model, {"\xE2\x96\x81w", "uh", "d"}).render() == "w-uh-d");
  CHECK(decode(model, {}).render() == "");
  CHECK(decode(model, {}).empty());
}

TEST_CASE("strict decode rejects out-of-vocabulary symbols") {
  // ties break lexicographically, so (ay, k) wins over (l, ay) here
  const auto model = learn_bpe(repeat_words({{"l-ay-k", 3}}), 1);
  CHECK(rendered_merges(model) == std::vector<std::string>{"ay k"});
  // 'w' is no alphabet unit of this model, 'l-ay' no learned symbol
  CHECK_THROWS_AS(decode(model, {"\xE2\x96\x81w"}, DecodeStrictness::Strict),
                  MalformedTokenError);
  CHECK_THROWS_AS(
      decode(model, {"\xE2\x96\x81l-ay"}, DecodeStrictness::Strict),
      MalformedTokenError);
  CHECK(decode(model, {"\xE2\x96\x81" "ay-k"}, DecodeStrictness::Strict)
            .render() == "ay-k");
  // a first token without the boundary marker only passes leniently
  CHECK(decode(model, {"l", "ay"}).render() == "l-ay");
  CHECK_THROWS_AS(decode(model, {"l", "ay"}, DecodeStrictness::Strict),
                  MalformedTokenError);
  // garbage is malformed under either strictness
  CHECK_THROWS_AS(decode(model, {"\xE2\x96\x81"}), MalformedTokenError);
  CHECK_THROWS_AS(decode(model, {"\xE2\x96\x81l--ay"}), MalformedTokenError);
}

TEST_CASE("decode(encode(s)) is the identity on random sentences and models") {
  std::mt19937_64 rng(73);
  for (int m = 0; m < 20; ++m) {
    const auto corpus = random_corpus(rng, 40, 8);
    const auto model = m % 2 == 0 ? learn_bpe(corpus, 1 + rng() % 12)
                                  : learn_syllables(corpus, 1 + rng() % 12);
    // sentences drawn over the model alphabet
    const auto& units = model.alphabet().units();
    for (int i = 0; i < 500; ++i) {
      std::vector<PronWord> words;
      const std::size_t n_words = rng() % 6;
      for (std::size_t w = 0; w < n_words; ++w) {
        std::vector<PronUnit> word_units;
        const std::size_t len = 1 + rng() % 7;
        for (std::size_t k = 0; k < len; ++k) {
          word_units.push_back(
              PronUnit::phoneme(units[rng() % units.size()]));
        }
        words.push_back(PronWord(std::move(word_units)));
      }
      const PronSentence sentence(Lang::En, std::move(words));
      CHECK(decode(model, encode(model, sentence)) == sentence);
    }
  }
}

TEST_CASE("unknown units survive the round trip as singletons") {
  const auto model = learn_bpe(repeat_words({{"l-ay-k", 2}}), 2);
  const auto sentence = en_sentence({"l-ay-k", "w-uh-d", "l-ay-k"});
  const auto tokens = encode(model, sentence);
  CHECK(decode(model, tokens) == sentence);
}

TEST_CASE("token count is non-increasing in the merge budget") {
  std::mt19937_64 rng(79);
  const auto corpus = random_corpus(rng, 50, 8);
  std::size_t previous = SIZE_MAX;
  for (std::size_t m = 0; m <= 12; ++m) {
    const auto model = learn_bpe(corpus, m);
    std::size_t tokens = 0;
    for (const auto& sentence : corpus) {
      tokens += encode(model, sentence).size();
    }
    CHECK(tokens <= previous);
    previous = tokens;
  }
}

TEST_CASE("pseudo round trip is the identity over 10^4 random sentences") {
  std::mt19937_64 rng(83);
  const auto corpus = random_corpus(rng, 50, 8);
  const auto map = build_pseudo_map(corpus);
  for (int i = 0; i < 10000; ++i) {
    const auto sentence = random_corpus(rng, 10, 6).front();
    for (const auto& word : sentence.words()) {
      for (const auto& unit : word.units()) {
        const auto cp = build_pseudo_map({en_sentence({unit.value})})
                            .to_pseudo(unit.value);
        REQUIRE(cp.has_value());
      }
    }
    // map from this corpus: identity over its own units
    for (const auto& word : corpus.front().words()) {
      for (const auto& unit : word.units()) {
        CHECK(*map.to_unit(*map.to_pseudo(unit.value)) == unit.value);
      }
    }
  }
}

TEST_CASE("models survive the save/load round trip observationally") {
  std::mt19937_64 rng(89);
  const auto corpus = random_corpus(rng, 40, 8);
  for (const bool syllable : {false, true}) {
    const auto model = syllable ? learn_syllables(corpus, 10)
                                : learn_bpe(corpus, 10);
    const std::string path = "/tmp/prontk-test-model.txt";
    model.save(path);
    const auto loaded = SubwordModel::load(path);
    CHECK(loaded.kind() == model.kind());
    CHECK(loaded.unit_kind() == model.unit_kind());
    CHECK(loaded.merge_budget() == model.merge_budget());
    CHECK(loaded.alphabet().units() == model.alphabet().units());
    REQUIRE(loaded.merges().size() == model.merges().size());
    for (const auto& sentence : corpus) {
      CHECK(encode(loaded, sentence) == encode(model, sentence));
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("truncated model files are corrupt, future versions mismatch") {
  const auto corpus = repeat_words({{"l-ay-k", 3}, {"l-ay", 2}});
  const auto model = learn_bpe(corpus, 2);
  const std::string path = "/tmp/prontk-test-model2.txt";
  model.save(path);

  std::ifstream in(path);
  std::string full((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  in.close();

  {
    std::ofstream out(path);
    out << full.substr(0, full.size() / 2);
  }
  CHECK_THROWS_AS(SubwordModel::load(path), CorruptModelError);

  {
    std::ofstream out(path);
    out << "prontk-subword v2\n" << full.substr(full.find('\n') + 1);
  }
  CHECK_THROWS_AS(SubwordModel::load(path), VersionMismatchError);

  {
    std::ofstream out(path);
    out << "something else entirely\n";
  }
  CHECK_THROWS_AS(SubwordModel::load(path), CorruptModelError);
  std::remove(path.c_str());
}
