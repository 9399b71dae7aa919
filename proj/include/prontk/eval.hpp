#pragma once

#include <array>
#include <string>
#include <vector>

#include "prontk/convert.hpp"
#include "prontk/core.hpp"

namespace prontk {

enum class EvalSpace { Text, Pronunciation };

// How pronunciation sentences become BLEU tokens: one token per unit (word
// boundaries dissolve) or one token per hyphen-joined word.
enum class PronTokenMode { Unit, Word };

enum class BleuSmoothing { None, AddOne };

struct BleuReport {
  double bleu = 0.0;                    // percentage in [0, 100]
  std::array<double, 4> precisions{};   // p_1..p_4
  double brevity_penalty = 1.0;
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  std::string to_json() const;
};

// Corpus-level 4-gram BLEU, single reference, clipped counts summed corpus
// wide, BP = min(1, exp(1 - ref_len/hyp_len)). Any zero precision zeroes the
// score unless add-one smoothing was requested (never the default).
BleuReport corpus_bleu(const std::vector<std::vector<std::string>>& hyps,
                       const std::vector<std::vector<std::string>>& refs,
                       BleuSmoothing smoothing = BleuSmoothing::None);

std::vector<std::string> flatten_units(const PronSentence& sentence);
std::vector<std::string> word_tokens(const PronSentence& sentence);

struct EvalTokenOptions {
  PronTokenMode pron_token = PronTokenMode::Unit;
  bool lowercase = true;  // applied in text space; pronunciation units
                          // are lowercase already
};

// Tokens of a sentence already in the requested space.
std::vector<std::string> to_eval_space(const PronSentence& sentence,
                                       EvalSpace space,
                                       const EvalTokenOptions& opts = {});
std::vector<std::string> to_eval_space(const TextSentence& sentence,
                                       EvalSpace space,
                                       const EvalTokenOptions& opts = {});

// Crossing from text into pronunciation space runs the conversion pipeline;
// rejections propagate as ConversionRejectedError.
class ConversionRejectedError : public Error {
 public:
  explicit ConversionRejectedError(const Rejection& r)
      : Error("no pronunciation for word \"" + r.word + "\""), word_(r.word) {}
  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

std::vector<std::string> to_eval_space(const TextSentence& sentence,
                                       EvalSpace space, const Lexicon& lex,
                                       const G2PProvider* g2p,
                                       const ConversionOptions& conv_opts = {},
                                       const EvalTokenOptions& opts = {});

}  // namespace prontk
