#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "prontk/eval.hpp"

using namespace prontk;

namespace {

const std::string kFixtures = PRONTK_FIXTURE_DIR;

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return std::vector<std::string>(list.begin(), list.end());
}

std::vector<std::vector<std::string>> random_token_corpus(
    std::mt19937_64& rng, std::size_t sentences, std::size_t vocab,
    std::size_t max_len) {
  std::vector<std::vector<std::string>> corpus;
  for (std::size_t s = 0; s < sentences; ++s) {
    std::vector<std::string> tokens;
    const std::size_t len = 1 + rng() % max_len;
    for (std::size_t i = 0; i < len; ++i) {
      tokens.push_back("w" + std::to_string(rng() % vocab));
    }
    corpus.push_back(std::move(tokens));
  }
  return corpus;
}

}  // namespace

TEST_CASE("identical corpora score 100 with unit brevity penalty") {
  const std::vector<std::vector<std::string>> corpus = {
      toks({"a", "b", "c", "d"}), toks({"x", "y", "z", "w", "v"})};
  const auto report = corpus_bleu(corpus, corpus);
  CHECK(report.bleu == doctest::Approx(100.0));
  CHECK(report.brevity_penalty == doctest::Approx(1.0));
  for (double p : report.precisions) CHECK(p == doctest::Approx(1.0));
}

TEST_CASE("the hand-derived brevity-penalty case") {
  const auto report = corpus_bleu({toks({"a", "b", "c", "d"})},
                                  {toks({"a", "b", "c", "d", "e"})});
  for (double p : report.precisions) CHECK(p == doctest::Approx(1.0));
  CHECK(report.brevity_penalty == doctest::Approx(std::exp(-0.25)));
  CHECK(report.bleu == doctest::Approx(100.0 * std::exp(-0.25)).epsilon(1e-9));
  CHECK(std::abs(report.bleu - 77.8800783) < 0.01);
}

TEST_CASE("too-short hypotheses hit the zero-precision path") {
  const auto report =
      corpus_bleu({toks({"a", "b"})}, {toks({"a", "b", "c", "d"})});
  CHECK(report.bleu == 0.0);
  CHECK(report.precisions[0] == doctest::Approx(1.0));
  CHECK(report.precisions[1] == doctest::Approx(1.0));
  CHECK(report.precisions[2] == 0.0);
  CHECK(report.precisions[3] == 0.0);
}

TEST_CASE("degenerate inputs raise typed errors") {
  CHECK_THROWS_AS(corpus_bleu({}, {}), EmptyCorpusError);
  CHECK_THROWS_AS(corpus_bleu({toks({"a"})}, {}), LengthMismatchError);
}

TEST_CASE("clipping counts repeated n-grams against the reference") {
  // "the the the" vs "the cat": unigram matches clip at 1.
  const auto report =
      corpus_bleu({toks({"the", "the", "the"})}, {toks({"the", "cat"})});
  CHECK(report.precisions[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("corpus_bleu matches a brute-force recount on 200 random corpora") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto refs = random_token_corpus(rng, n, 4, 10);
    auto hyps = random_token_corpus(rng, n, 4, 10);
    // half the time, perturb the reference instead of drawing independently
    if (rng() % 2) {
      hyps = refs;
      for (auto& sentence : hyps) {
        if (rng() % 2 && sentence.size() > 1) sentence.pop_back();
        if (rng() % 2) sentence.push_back("w0");
      }
    }
    const auto report = corpus_bleu(hyps, refs);
    const auto expected = oracles::brute_bleu(hyps, refs);
    const double scale = std::max(1.0, std::abs(expected.bleu));
    CHECK(std::abs(report.bleu - expected.bleu) / scale <= 1e-9);
    CHECK(report.brevity_penalty ==
          doctest::Approx(expected.brevity_penalty).epsilon(1e-12));
    for (int k = 0; k < 4; ++k) {
      CHECK(report.precisions[k] ==
            doctest::Approx(expected.precisions[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("reversing a hypothesis never improves its score") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto refs = random_token_corpus(rng, 3, 6, 12);
    const auto straight = corpus_bleu(refs, refs);
    auto reversed = refs;
    for (auto& sentence : reversed) {
      std::reverse(sentence.begin(), sentence.end());
    }
    const auto twisted = corpus_bleu(reversed, refs);
    CHECK(twisted.bleu <= straight.bleu + 1e-9);
  }
}

TEST_CASE("add-one smoothing only fires when asked") {
  const auto plain =
      corpus_bleu({toks({"a", "b"})}, {toks({"a", "b", "c", "d"})});
  CHECK(plain.bleu == 0.0);
  const auto smoothed = corpus_bleu({toks({"a", "b"})},
                                    {toks({"a", "b", "c", "d"})},
                                    BleuSmoothing::AddOne);
  CHECK(smoothed.bleu > 0.0);
}

TEST_CASE("pronunciation space tokenizes at the unit level by default") {
  const auto sentence = PronSentence::parse("w-uh-d y-uw", Lang::En);
  CHECK(to_eval_space(sentence, EvalSpace::Pronunciation) ==
        toks({"w", "uh", "d", "y", "uw"}));

  EvalTokenOptions words;
  words.pron_token = PronTokenMode::Word;
  CHECK(to_eval_space(sentence, EvalSpace::Pronunciation, words) ==
        toks({"w-uh-d", "y-uw"}));
}

TEST_CASE("text space keeps tokens, lowercasing unless disabled") {
  const auto sentence = TextSentence::from_line("Which Fish ?", Lang::En);
  CHECK(to_eval_space(sentence, EvalSpace::Text) ==
        toks({"which", "fish", "?"}));
  EvalTokenOptions keep;
  keep.lowercase = false;
  CHECK(to_eval_space(sentence, EvalSpace::Text, keep) ==
        toks({"Which", "Fish", "?"}));
}

TEST_CASE("crossing text into pronunciation space runs the converter") {
  const auto lex = load_lexicon(kFixtures + "/lexicon_zh.tsv", Lang::Zh,
                                LexiconFormat::SimpleTSV);
  const auto sentence = TextSentence::from_line("晚餐 想", Lang::Zh);
  CHECK(to_eval_space(sentence, EvalSpace::Pronunciation, lex, nullptr) ==
        toks({"wan_3", "can_1", "xiang_3"}));

  const auto bad = TextSentence::from_line("未知词", Lang::Zh);
  CHECK_THROWS_AS(
      to_eval_space(bad, EvalSpace::Pronunciation, lex, nullptr),
      ConversionRejectedError);
}

TEST_CASE("identical sentences score 100 in either space") {
  const auto lex = load_lexicon(kFixtures + "/lexicon_zh.tsv", Lang::Zh,
                                LexiconFormat::SimpleTSV);
  const auto sentence = TextSentence::from_line("晚餐 想 吃 鱼", Lang::Zh);
  const auto text_tokens = to_eval_space(sentence, EvalSpace::Text);
  const auto pron_tokens =
      to_eval_space(sentence, EvalSpace::Pronunciation, lex, nullptr);
  CHECK(corpus_bleu({text_tokens}, {text_tokens}).bleu ==
        doctest::Approx(100.0));
  CHECK(corpus_bleu({pron_tokens}, {pron_tokens}).bleu ==
        doctest::Approx(100.0));
}

TEST_CASE("the JSON report line carries every field") {
  const auto report = corpus_bleu({toks({"a", "b", "c", "d"})},
                                  {toks({"a", "b", "c", "d", "e"})});
  const auto json = report.to_json();
  CHECK(json.find("\"bleu\":") != std::string::npos);
  CHECK(json.find("\"precisions\":[") != std::string::npos);
  CHECK(json.find("\"brevity_penalty\":") != std::string::npos);
  CHECK(json.find("\"hyp_length\":4") != std::string::npos);
  CHECK(json.find("\"ref_length\":5") != std::string::npos);
}
