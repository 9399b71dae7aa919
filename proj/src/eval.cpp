#include "prontk/eval.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace prontk {

namespace {

// n-gram -> count within one sentence; n-grams keyed by the space-joined
// tokens, collision-free because tokens are whitespace-delimited.
std::map<std::string, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key += ' ';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

BleuReport corpus_bleu(const std::vector<std::vector<std::string>>& hyps,
                       const std::vector<std::vector<std::string>>& refs,
                       BleuSmoothing smoothing) {
  if (hyps.size() != refs.size()) {
    throw LengthMismatchError(hyps.size(), refs.size());
  }
  if (hyps.empty()) throw EmptyCorpusError();

  std::array<std::size_t, 4> correct{};
  std::array<std::size_t, 4> total{};
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  for (std::size_t s = 0; s < hyps.size(); ++s) {
    hyp_length += hyps[s].size();
    ref_length += refs[s].size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hyp_grams = ngram_counts(hyps[s], n);
      const auto ref_grams = ngram_counts(refs[s], n);
      for (const auto& [gram, count] : hyp_grams) {
        total[n - 1] += count;
        const auto it = ref_grams.find(gram);
        if (it != ref_grams.end()) {
          correct[n - 1] += std::min(count, it->second);
        }
      }
    }
  }

  BleuReport report;
  report.hyp_length = hyp_length;
  report.ref_length = ref_length;
  for (std::size_t n = 0; n < 4; ++n) {
    double c = static_cast<double>(correct[n]);
    double t = static_cast<double>(total[n]);
    if (smoothing == BleuSmoothing::AddOne && n > 0) {
      c += 1.0;
      t += 1.0;
    }
    report.precisions[n] = t > 0.0 ? c / t : 0.0;
  }
  if (hyp_length == 0) {
    report.brevity_penalty = 0.0;
    report.bleu = 0.0;
    return report;
  }
  report.brevity_penalty =
      hyp_length < ref_length
          ? std::exp(1.0 - static_cast<double>(ref_length) /
                               static_cast<double>(hyp_length))
          : 1.0;
  double log_sum = 0.0;
  bool zero = false;
  for (double p : report.precisions) {
    if (p <= 0.0) {
      zero = true;
      break;
    }
    log_sum += std::log(p);
  }
  report.bleu = zero ? 0.0
                     : 100.0 * report.brevity_penalty * std::exp(log_sum / 4.0);
  return report;
}

std::string BleuReport::to_json() const {
  std::ostringstream out;
  out.precision(10);
  out << "{\"bleu\":" << bleu << ",\"precisions\":[" << precisions[0] << ','
      << precisions[1] << ',' << precisions[2] << ',' << precisions[3]
      << "],\"brevity_penalty\":" << brevity_penalty
      << ",\"hyp_length\":" << hyp_length << ",\"ref_length\":" << ref_length
      << "}";
  return out.str();
}

std::vector<std::string> flatten_units(const PronSentence& sentence) {
  std::vector<std::string> out;
  for (const auto& word : sentence.words()) {
    for (const auto& unit : word.units()) out.push_back(unit.value);
  }
  return out;
}

std::vector<std::string> word_tokens(const PronSentence& sentence) {
  std::vector<std::string> out;
  for (const auto& word : sentence.words()) out.push_back(word.render());
  return out;
}

std::vector<std::string> to_eval_space(const PronSentence& sentence,
                                       EvalSpace space,
                                       const EvalTokenOptions& opts) {
  if (space == EvalSpace::Text) {
    throw Error("pronunciation sentences cannot be scored in text space; "
                "text recovery is out of scope");
  }
  return opts.pron_token == PronTokenMode::Unit ? flatten_units(sentence)
                                                : word_tokens(sentence);
}

std::vector<std::string> to_eval_space(const TextSentence& sentence,
                                       EvalSpace space,
                                       const EvalTokenOptions& opts) {
  if (space != EvalSpace::Text) {
    throw Error("converting text to pronunciation space needs a lexicon; "
                "use the overload with converters");
  }
  std::vector<std::string> out = sentence.tokens();
  if (opts.lowercase) {
    for (auto& t : out) t = lowercase_ascii(t);
  }
  return out;
}

std::vector<std::string> to_eval_space(const TextSentence& sentence,
                                       EvalSpace space, const Lexicon& lex,
                                       const G2PProvider* g2p,
                                       const ConversionOptions& conv_opts,
                                       const EvalTokenOptions& opts) {
  if (space == EvalSpace::Text) return to_eval_space(sentence, space, opts);
  const auto outcome = convert_sentence(sentence, lex, g2p, conv_opts);
  if (!outcome.ok()) throw ConversionRejectedError(outcome.rejection());
  return to_eval_space(outcome.sentence(), space, opts);
}

}  // namespace prontk
