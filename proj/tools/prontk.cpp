// prontk: pronunciation-space corpus toolkit.
//
// Subcommands: convert, build-dataset, split, stats, learn-bpe,
// learn-syllables, apply-bpe, decode-bpe, bleu. One sentence per line on
// every stream; diagnostics go to stderr, data to files or stdout.
// Exit codes: 0 success, 1 input/validation error, 2 internal error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "prontk/convert.hpp"
#include "prontk/dataset.hpp"
#include "prontk/eval.hpp"
#include "prontk/lexicon.hpp"
#include "prontk/normalize.hpp"
#include "prontk/subword.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using nlohmann::json;
using namespace prontk;

// ---------------------------------------------------------------------------
// Run manifest

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buffer[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

std::size_t file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open input file: " + path);
  return static_cast<std::size_t>(in.tellg());
}

class RunManifest {
 public:
  RunManifest(std::string subcommand, std::string path)
      : path_(std::move(path)), start_(std::chrono::steady_clock::now()) {
    doc_["schema"] = 1;
    doc_["tool"] = "prontk";
    doc_["version"] = kToolVersion;
    doc_["subcommand"] = std::move(subcommand);
    doc_["flags"] = json::object();
    doc_["inputs"] = json::object();
    doc_["counters"] = json::object();
  }

  void flag(const std::string& name, const std::string& value) {
    doc_["flags"][name] = value;
  }
  void flag(const std::string& name, std::uint64_t value) {
    doc_["flags"][name] = value;
  }
  void input(const std::string& path) {
    doc_["inputs"][path] = {{"checksum", fnv1a64_file(path)},
                            {"bytes", file_bytes(path)}};
  }
  void counter(const std::string& name, std::uint64_t value) {
    doc_["counters"][name] = value;
  }

  // Atomic write: the varying wall-time lives under "timing" so everything
  // else is byte-identical across reruns.
  void write(const std::string& status, const std::string& error = "") {
    if (path_.empty()) return;
    doc_["status"] = status;
    if (!error.empty()) doc_["error"] = error;
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    doc_["timing"] = {{"wall_ms", elapsed.count()}};
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw IoError("cannot write manifest: " + path_);
      out << doc_.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path_.c_str()) != 0) {
      throw IoError("cannot finalize manifest: " + path_);
    }
  }

 private:
  json doc_;
  std::string path_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Shared flag bundles

struct LexiconFlags {
  std::string path;
  std::string format = "tsv";  // tsv | voxforge | dacidian
  std::string dacidian_pinyins;
  bool strict = false;

  void attach(CLI::App* cmd, const std::string& prefix, bool required) {
    auto* opt = cmd->add_option("--" + prefix + "lexicon", path,
                                "pronunciation lexicon file");
    if (required) opt->required();
    cmd->add_option("--" + prefix + "lexicon-format", format,
                    "lexicon format: tsv, voxforge, dacidian")
        ->check(CLI::IsMember({"tsv", "voxforge", "dacidian"}));
    cmd->add_option("--" + prefix + "dacidian-pinyins", dacidian_pinyins,
                    "id -> pinyin file for the dacidian format");
  }

  Lexicon load(Lang lang) const {
    LexiconLoadOptions opts;
    opts.mode = strict ? LoadMode::Strict : LoadMode::Lenient;
    if (format == "dacidian") {
      if (lang != Lang::Zh) throw Error("dacidian lexicons are Chinese");
      if (dacidian_pinyins.empty()) {
        throw Error("the dacidian format needs --dacidian-pinyins");
      }
      return load_dacidian(path, dacidian_pinyins, opts);
    }
    const auto fmt = format == "voxforge" ? LexiconFormat::Voxforge
                                          : LexiconFormat::SimpleTSV;
    return load_lexicon(path, lang, fmt, opts);
  }
};

struct G2PFlags {
  std::string spec = "rules";  // rules | none | external:<cmd>
  std::string zh_char_table;

  std::unique_ptr<G2PProvider> build(Lang lang) const {
    if (spec == "none") return nullptr;
    if (spec == "rules") {
      if (lang == Lang::En) return std::make_unique<RuleG2PEn>();
      CharPinyinTable table;
      if (!zh_char_table.empty()) {
        table = CharPinyinTable::load(zh_char_table);
      }
      return std::make_unique<RuleG2PZh>(std::move(table));
    }
    if (spec.rfind("external:", 0) == 0) {
      return std::make_unique<ExternalG2P>(spec.substr(9),
                                           unit_kind_for(lang));
    }
    throw Error("unknown --g2p value \"" + spec +
                "\"; expected rules, none, or external:<cmd>");
  }
};

struct ConversionFlags {
  std::string number_mode = "auto";
  std::string on_missing = "reject";
  std::string zh_number_table_path;
  std::string latin_fallback = "rules";

  void attach(CLI::App* cmd) {
    cmd->add_option("--number-mode", number_mode,
                    "number reading: auto, magnitude, digitwise")
        ->check(CLI::IsMember({"auto", "magnitude", "digitwise"}));
    cmd->add_option("--on-missing", on_missing,
                    "unresolvable words: reject the sentence or skip-word")
        ->check(CLI::IsMember({"reject", "skip-word"}));
    cmd->add_option("--zh-number-table", zh_number_table_path,
                    "override the numeral-to-pinyin table");
    cmd->add_option("--latin-fallback", latin_fallback,
                    "Latin tokens in Chinese text: rules or none")
        ->check(CLI::IsMember({"rules", "none"}));
  }

  // The returned options borrow from the holders, which must outlive them.
  ConversionOptions build(std::optional<ZhNumberTable>& table_holder,
                          std::unique_ptr<G2PProvider>& latin_holder) const {
    ConversionOptions opts;
    if (number_mode == "magnitude") opts.number_policy = NumberPolicy::Magnitude;
    if (number_mode == "digitwise") opts.number_policy = NumberPolicy::DigitWise;
    if (on_missing == "skip-word") opts.on_missing = OnMissing::SkipWord;
    if (!zh_number_table_path.empty()) {
      table_holder = ZhNumberTable::load(zh_number_table_path);
      opts.zh_number_table = &*table_holder;
    }
    if (latin_fallback == "rules") {
      latin_holder = std::make_unique<RuleG2PEn>();
      opts.latin_fallback = latin_holder.get();
    }
    return opts;
  }
};

// ---------------------------------------------------------------------------
// Stream helpers

std::unique_ptr<std::istream> open_in(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;  // stdin
  auto in = std::make_unique<std::ifstream>(path);
  if (!*in) throw IoError("cannot open input file: " + path);
  return in;
}

std::unique_ptr<std::ostream> open_out(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;  // stdout
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw IoError("cannot open output file: " + path);
  return out;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> read_lines_path(const std::string& path) {
  auto in = open_in(path);
  return read_lines(in ? *in : std::cin);
}

Lang parse_lang(const std::string& name) {
  if (name == "zh") return Lang::Zh;
  if (name == "en") return Lang::En;
  throw Error("unknown --lang \"" + name + "\"; expected zh or en");
}

// ---------------------------------------------------------------------------
// convert

struct ConvertCmd {
  std::string lang = "zh";
  LexiconFlags lexicon;
  G2PFlags g2p;
  ConversionFlags conversion;
  std::string in_path, out_path, rejects_path, manifest_path;
  unsigned jobs = 1;

  int run() {
    RunManifest manifest("convert", manifest_path);
    manifest.flag("lang", lang);
    manifest.flag("lexicon", lexicon.path);
    manifest.flag("g2p", g2p.spec);
    manifest.flag("number-mode", conversion.number_mode);
    manifest.flag("on-missing", conversion.on_missing);
    manifest.flag("jobs", jobs);
    try {
      const Lang language = parse_lang(lang);
      const Lexicon lex = lexicon.load(language);
      manifest.input(lexicon.path);
      const auto provider = g2p.build(language);
      std::optional<ZhNumberTable> table_holder;
      std::unique_ptr<G2PProvider> latin_holder;
      const ConversionOptions opts =
          conversion.build(table_holder, latin_holder);

      auto in = open_in(in_path);
      auto out = open_out(out_path);
      auto rejects = open_out(rejects_path.empty() ? "" : rejects_path);
      std::istream& input = in ? *in : std::cin;
      std::ostream& output = out ? *out : std::cout;

      // Chunked ordered map: stripes convert in parallel, results are
      // consumed in input order, so -j never changes the output bytes.
      const unsigned width = std::max(1u, jobs);
      std::uint64_t lines = 0, converted = 0, rejected = 0;
      std::vector<std::string> chunk;
      bool eof = false;
      while (!eof) {
        chunk.clear();
        std::string line;
        while (chunk.size() < 4096 && std::getline(input, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          chunk.push_back(line);
        }
        eof = chunk.size() < 4096;
        if (chunk.empty()) break;

        std::vector<std::optional<ConversionOutcome>> outcomes(chunk.size());
        auto work = [&](unsigned stripe) {
          for (std::size_t i = stripe; i < chunk.size(); i += width) {
            outcomes[i] = convert_sentence(
                TextSentence::from_line(chunk[i], language), lex,
                provider.get(), opts);
          }
        };
        if (width == 1) {
          work(0);
        } else {
          std::vector<std::thread> workers;
          for (unsigned w = 0; w < width; ++w) workers.emplace_back(work, w);
          for (auto& t : workers) t.join();
        }

        for (const auto& outcome : outcomes) {
          ++lines;
          if (outcome->ok()) {
            ++converted;
            output << outcome->sentence().render() << '\n';
          } else {
            ++rejected;
            if (rejects) {
              *rejects << lines << '\t' << outcome->rejection().word
                       << "\tno-pronunciation\n";
            } else {
              std::cerr << "line " << lines << ": no pronunciation for \""
                        << outcome->rejection().word << "\"\n";
            }
          }
        }
      }
      std::cerr << "convert: " << lines << " lines, " << converted
                << " converted, " << rejected << " rejected\n";
      manifest.counter("lines", lines);
      manifest.counter("converted", converted);
      manifest.counter("rejected", rejected);
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// build-dataset

struct BuildCmd {
  std::string zh_path, en_path, out_dir;
  LexiconFlags zh_lexicon, en_lexicon;
  G2PFlags zh_g2p, en_g2p;
  ConversionFlags conversion;
  bool jsonl = false;
  unsigned jobs = 1;

  int run() {
    const std::string manifest_path = out_dir + "/manifest.json";
    RunManifest manifest("build-dataset", manifest_path);
    manifest.flag("zh", zh_path);
    manifest.flag("en", en_path);
    manifest.flag("zh-lexicon", zh_lexicon.path);
    manifest.flag("en-lexicon", en_lexicon.path);
    manifest.flag("number-mode", conversion.number_mode);
    manifest.flag("jobs", jobs);
    try {
      const Lexicon zh_lex = zh_lexicon.load(Lang::Zh);
      const Lexicon en_lex = en_lexicon.load(Lang::En);
      manifest.input(zh_path);
      manifest.input(en_path);
      manifest.input(zh_lexicon.path);
      manifest.input(en_lexicon.path);
      const auto zh_provider = zh_g2p.build(Lang::Zh);
      const auto en_provider = en_g2p.build(Lang::En);
      std::optional<ZhNumberTable> table_holder;
      std::unique_ptr<G2PProvider> latin_holder;
      BuildOptions opts;
      opts.conversion = conversion.build(table_holder, latin_holder);
      opts.jobs = jobs;

      auto zh_in = open_in(zh_path);
      auto en_in = open_in(en_path);
      auto tsv_out = open_out(out_dir + "/dataset.tsv");
      std::unique_ptr<std::ostream> jsonl_out;
      if (jsonl) jsonl_out = open_out(out_dir + "/dataset.jsonl");

      const BuildReport report = build_dataset(
          *zh_in, *en_in, zh_lex, en_lex, zh_provider.get(), en_provider.get(),
          opts, [&](DatasetEntry&& entry) {
            *tsv_out << to_tsv(entry) << '\n';
            if (jsonl_out) *jsonl_out << to_jsonl(entry) << '\n';
          });

      std::cerr << "build-dataset: " << report.total << " pairs, "
                << report.kept << " kept, " << report.rejected_zh
                << " rejected zh, " << report.rejected_en << " rejected en\n";
      manifest.counter("total", report.total);
      manifest.counter("kept", report.kept);
      manifest.counter("rejected_zh", report.rejected_zh);
      manifest.counter("rejected_en", report.rejected_en);
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// split

struct SplitCmd {
  std::string in_path, out_dir;
  std::uint64_t dev = 4096, test = 4096, seed = 0;

  int run() {
    const std::string manifest_path = out_dir + "/manifest.json";
    RunManifest manifest("split", manifest_path);
    manifest.flag("in", in_path);
    manifest.flag("dev", dev);
    manifest.flag("test", test);
    manifest.flag("seed", seed);
    try {
      if (in_path.empty() || in_path == "-") {
        throw Error("split reads its input twice and needs a real file");
      }
      manifest.input(in_path);
      // Two passes keep memory bounded: only the index permutation lives in
      // RAM. Lines are opaque here.
      std::size_t n = 0;
      {
        auto in = open_in(in_path);
        std::string line;
        while (std::getline(*in, line)) ++n;
      }
      const SplitIndices idx = split_indices(
          n, SplitSpec{static_cast<std::size_t>(dev),
                       static_cast<std::size_t>(test), seed});
      enum : std::uint8_t { kTrain = 0, kDev = 1, kTest = 2 };
      std::vector<std::uint8_t> assignment(n, kTrain);
      for (std::size_t i : idx.dev) assignment[i] = kDev;
      for (std::size_t i : idx.test) assignment[i] = kTest;

      auto train_out = open_out(out_dir + "/train.tsv");
      auto dev_out = open_out(out_dir + "/dev.tsv");
      auto test_out = open_out(out_dir + "/test.tsv");
      std::ostream* sinks[3] = {train_out.get(), dev_out.get(),
                                test_out.get()};
      auto in = open_in(in_path);
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        *sinks[assignment[line_no++]] << line << '\n';
      }
      std::cerr << "split: " << idx.train.size() << " train, "
                << idx.dev.size() << " dev, " << idx.test.size() << " test\n";
      manifest.counter("train", idx.train.size());
      manifest.counter("dev", idx.dev.size());
      manifest.counter("test", idx.test.size());
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// stats

struct StatsCmd {
  std::string in_path;
  bool count_punct = false;
  bool no_collapse_numbers = false;
  bool no_lowercase = false;
  std::string manifest_path;

  int run() {
    RunManifest manifest("stats", manifest_path);
    manifest.flag("in", in_path);
    try {
      manifest.input(in_path);
      const auto entries = read_tsv_file(in_path);
      StatsOptions opts;
      opts.count_punct_tokens = count_punct;
      opts.collapse_numbers = !no_collapse_numbers;
      opts.lowercase_en = !no_lowercase;
      const StatsReport report = corpus_stats(entries, opts);
      std::cout << "entries            " << entries.size() << '\n'
                << "zh distinct words  " << report.zh_distinct_words << '\n'
                << "en distinct words  " << report.en_distinct_words << '\n'
                << "zh total tokens    " << report.zh_total_tokens << '\n'
                << "en total tokens    " << report.en_total_tokens << '\n'
                << "distinct pinyins   " << report.distinct_pinyins << '\n'
                << "distinct phonemes  " << report.distinct_phonemes << '\n'
                << "distinct zh chars  " << report.distinct_zh_chars << '\n'
                << report.to_json() << '\n';
      manifest.counter("entries", entries.size());
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// learn-bpe / learn-syllables

struct LearnCmd {
  bool syllables = false;
  std::string units = "phoneme";  // pinyin | phoneme
  std::string in_path, model_path, manifest_path;
  std::int64_t merges = -1;  // default depends on units

  int run() {
    RunManifest manifest(syllables ? "learn-syllables" : "learn-bpe",
                         manifest_path);
    try {
      const UnitKind kind =
          units == "pinyin" ? UnitKind::Pinyin : UnitKind::Phoneme;
      // Parity defaults from the experiment setup: 16000 Chinese subwords,
      // 10000 English subwords/syllables.
      const std::size_t budget =
          merges >= 0 ? static_cast<std::size_t>(merges)
                      : (kind == UnitKind::Pinyin ? 16000 : 10000);
      manifest.flag("units", units);
      manifest.flag("merges", static_cast<std::uint64_t>(budget));
      manifest.flag("model", model_path);
      if (!in_path.empty() && in_path != "-") manifest.input(in_path);

      // Embedded words of the other unit kind (Latin inside Chinese text)
      // are excluded from training; they pass through encoding unchanged.
      std::vector<PronSentence> corpus;
      std::uint64_t skipped_words = 0;
      for (const auto& line : read_lines_path(in_path)) {
        const auto sentence =
            PronSentence::parse_structural(line, lang_for(kind));
        std::vector<PronWord> keep;
        for (const auto& word : sentence.words()) {
          if (word.kind() == kind) {
            keep.push_back(word);
          } else {
            ++skipped_words;
          }
        }
        corpus.push_back(PronSentence(lang_for(kind), std::move(keep)));
      }
      const SubwordModel model = syllables
                                     ? learn_syllables(corpus, budget)
                                     : learn_bpe(corpus, budget);
      model.save(model_path);
      std::cerr << (syllables ? "learn-syllables: " : "learn-bpe: ")
                << corpus.size() << " sentences, "
                << model.alphabet().size() << " units, "
                << model.merges().size() << " merges"
                << (model.stopped_early() ? " (stopped early)" : "") << '\n';
      if (skipped_words > 0) {
        std::cerr << "learn: skipped " << skipped_words
                  << " words of the other unit kind\n";
      }
      manifest.counter("sentences", corpus.size());
      manifest.counter("skipped_words", skipped_words);
      manifest.counter("distinct_units", model.alphabet().size());
      manifest.counter("merges_learned", model.merges().size());
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// apply-bpe / decode-bpe

struct ApplyCmd {
  std::string model_path, in_path, out_path, manifest_path;
  bool strict = false;

  int run_apply() {
    RunManifest manifest("apply-bpe", manifest_path);
    manifest.flag("model", model_path);
    try {
      manifest.input(model_path);
      const SubwordModel model = SubwordModel::load(model_path);
      auto in = open_in(in_path);
      auto out = open_out(out_path);
      std::istream& input = in ? *in : std::cin;
      std::ostream& output = out ? *out : std::cout;
      std::uint64_t lines = 0;
      std::string line;
      while (std::getline(input, line)) {
        ++lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto sentence =
            PronSentence::parse_structural(line, lang_for(model.unit_kind()));
        const auto tokens =
            encode(model, sentence,
                   strict ? UnknownPolicy::Strict : UnknownPolicy::Passthrough);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
          if (i) output << ' ';
          output << tokens[i];
        }
        output << '\n';
      }
      manifest.counter("lines", lines);
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }

  int run_decode() {
    RunManifest manifest("decode-bpe", manifest_path);
    manifest.flag("model", model_path);
    try {
      manifest.input(model_path);
      const SubwordModel model = SubwordModel::load(model_path);
      auto in = open_in(in_path);
      auto out = open_out(out_path);
      std::istream& input = in ? *in : std::cin;
      std::ostream& output = out ? *out : std::cout;
      std::uint64_t lines = 0;
      std::string line;
      while (std::getline(input, line)) {
        ++lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto sentence =
            decode(model, split_ws(line),
                   strict ? DecodeStrictness::Strict : DecodeStrictness::Lenient);
        output << sentence.render() << '\n';
      }
      manifest.counter("lines", lines);
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

// ---------------------------------------------------------------------------
// bleu

struct BleuCmd {
  std::string hyp_path, ref_path;
  std::string space = "text";       // text | pron
  std::string pron_token = "unit";  // unit | word
  std::string smooth = "none";      // none | add1
  bool no_lowercase = false;
  std::string manifest_path;

  std::vector<std::vector<std::string>> tokenize(
      const std::vector<std::string>& lines) const {
    std::vector<std::vector<std::string>> out;
    out.reserve(lines.size());
    EvalTokenOptions opts;
    opts.lowercase = !no_lowercase;
    opts.pron_token =
        pron_token == "word" ? PronTokenMode::Word : PronTokenMode::Unit;
    for (const auto& line : lines) {
      if (space == "pron") {
        out.push_back(to_eval_space(
            PronSentence::parse_structural(line, Lang::En),
            EvalSpace::Pronunciation, opts));
      } else {
        out.push_back(to_eval_space(TextSentence::from_line(line, Lang::En),
                                    EvalSpace::Text, opts));
      }
    }
    return out;
  }

  int run() {
    RunManifest manifest("bleu", manifest_path);
    manifest.flag("hyp", hyp_path);
    manifest.flag("ref", ref_path);
    manifest.flag("space", space);
    manifest.flag("pron-token", pron_token);
    try {
      manifest.input(hyp_path);
      manifest.input(ref_path);
      const auto hyps = tokenize(read_lines_path(hyp_path));
      const auto refs = tokenize(read_lines_path(ref_path));
      const auto smoothing =
          smooth == "add1" ? BleuSmoothing::AddOne : BleuSmoothing::None;
      const BleuReport report = corpus_bleu(hyps, refs, smoothing);
      char line[256];
      std::snprintf(line, sizeof(line),
                    "BLEU = %.2f, %.1f/%.1f/%.1f/%.1f "
                    "(BP=%.3f, hyp_len=%zu, ref_len=%zu)",
                    report.bleu, 100 * report.precisions[0],
                    100 * report.precisions[1], 100 * report.precisions[2],
                    100 * report.precisions[3], report.brevity_penalty,
                    report.hyp_length, report.ref_length);
      std::cout << line << '\n' << report.to_json() << '\n';
      manifest.counter("sentences", hyps.size());
      manifest.write("ok");
      return 0;
    } catch (const Error& e) {
      manifest.write("error", e.what());
      throw;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prontk: parallel text in pronunciation space"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print tool and data versions");

  ConvertCmd convert_cmd;
  auto* convert = app.add_subcommand(
      "convert", "text sentences to pronunciation sentences");
  convert->add_option("--lang", convert_cmd.lang, "zh or en")->required();
  convert_cmd.lexicon.attach(convert, "", true);
  convert->add_flag("--strict-lexicon", convert_cmd.lexicon.strict,
                    "fail on malformed lexicon lines");
  convert->add_option("--g2p", convert_cmd.g2p.spec,
                      "fallback: rules, none, external:<cmd>");
  convert->add_option("--zh-char-table", convert_cmd.g2p.zh_char_table,
                      "character table for the Chinese rule G2P");
  convert_cmd.conversion.attach(convert);
  convert->add_option("--in", convert_cmd.in_path, "input file (default stdin)");
  convert->add_option("--out", convert_cmd.out_path,
                      "output file (default stdout)");
  convert->add_option("--rejects", convert_cmd.rejects_path,
                      "sink for rejected lines (line, word, reason)");
  convert->add_option("--jobs", convert_cmd.jobs, "parallel conversion width");
  convert->add_option("--manifest", convert_cmd.manifest_path,
                      "write a run manifest here");

  BuildCmd build_cmd;
  auto* build = app.add_subcommand("build-dataset",
                                   "build (s, t, s_p, t_p) quadruples");
  build->add_option("--zh", build_cmd.zh_path, "Chinese text, one per line")
      ->required();
  build->add_option("--en", build_cmd.en_path, "English text, line-aligned")
      ->required();
  build->add_option("--out", build_cmd.out_dir, "output directory")->required();
  build_cmd.zh_lexicon.attach(build, "zh-", true);
  build_cmd.en_lexicon.attach(build, "en-", true);
  build->add_option("--zh-g2p", build_cmd.zh_g2p.spec,
                    "Chinese fallback: rules, none, external:<cmd>");
  build->add_option("--zh-char-table", build_cmd.zh_g2p.zh_char_table,
                    "character table for the Chinese rule G2P");
  build->add_option("--en-g2p", build_cmd.en_g2p.spec,
                    "English fallback: rules, none, external:<cmd>");
  build_cmd.conversion.attach(build);
  build->add_flag("--jsonl", build_cmd.jsonl, "also write dataset.jsonl");
  build->add_option("--jobs", build_cmd.jobs, "parallel conversion width");

  SplitCmd split_cmd;
  auto* split = app.add_subcommand("split", "seeded train/dev/test split");
  split->add_option("--in", split_cmd.in_path, "dataset file")->required();
  split->add_option("--out", split_cmd.out_dir, "output directory")->required();
  split->add_option("--dev", split_cmd.dev, "dev set size");
  split->add_option("--test", split_cmd.test, "test set size");
  split->add_option("--seed", split_cmd.seed, "shuffle seed");

  StatsCmd stats_cmd;
  auto* stats = app.add_subcommand("stats", "corpus statistics of a dataset");
  stats->add_option("file", stats_cmd.in_path, "dataset TSV")->required();
  stats->add_flag("--count-punct", stats_cmd.count_punct,
                  "count punctuation-only tokens as words");
  stats->add_flag("--no-collapse-numbers", stats_cmd.no_collapse_numbers,
                  "count each numeric token separately");
  stats->add_flag("--no-lowercase", stats_cmd.no_lowercase,
                  "keep English case when counting distinct words");
  stats->add_option("--manifest", stats_cmd.manifest_path,
                    "write a run manifest here");

  LearnCmd learn_bpe_cmd;
  auto* learn_bpe_sub = app.add_subcommand(
      "learn-bpe", "learn plain merges over pronunciation sentences");
  learn_bpe_sub->add_option("--in", learn_bpe_cmd.in_path,
                            "pronunciation sentences (default stdin)");
  learn_bpe_sub->add_option("--units", learn_bpe_cmd.units, "pinyin or phoneme")
      ->check(CLI::IsMember({"pinyin", "phoneme"}));
  learn_bpe_sub->add_option("-m,--merges", learn_bpe_cmd.merges,
                            "merge budget (default 16000 pinyin, 10000 phoneme)");
  learn_bpe_sub->add_option("--model", learn_bpe_cmd.model_path,
                            "model output path")
      ->required();
  learn_bpe_sub->add_option("--manifest", learn_bpe_cmd.manifest_path,
                            "write a run manifest here");

  LearnCmd learn_syl_cmd;
  learn_syl_cmd.syllables = true;
  auto* learn_syl = app.add_subcommand(
      "learn-syllables", "vowel-constrained merges over phoneme sentences");
  learn_syl->add_option("--in", learn_syl_cmd.in_path,
                        "pronunciation sentences (default stdin)");
  learn_syl->add_option("-m,--merges", learn_syl_cmd.merges,
                        "merge budget (default 10000)");
  learn_syl->add_option("--model", learn_syl_cmd.model_path,
                        "model output path")
      ->required();
  learn_syl->add_option("--manifest", learn_syl_cmd.manifest_path,
                        "write a run manifest here");

  ApplyCmd apply_cmd;
  auto* apply = app.add_subcommand("apply-bpe",
                                   "encode pronunciation sentences");
  apply->add_option("--model", apply_cmd.model_path, "model file")->required();
  apply->add_option("--in", apply_cmd.in_path, "input (default stdin)");
  apply->add_option("--out", apply_cmd.out_path, "output (default stdout)");
  apply->add_flag("--strict", apply_cmd.strict,
                  "fail on units outside the model alphabet");
  apply->add_option("--manifest", apply_cmd.manifest_path,
                    "write a run manifest here");

  ApplyCmd decode_cmd;
  auto* decode_sub = app.add_subcommand("decode-bpe",
                                        "invert apply-bpe token streams");
  decode_sub->add_option("--model", decode_cmd.model_path, "model file")
      ->required();
  decode_sub->add_option("--in", decode_cmd.in_path, "input (default stdin)");
  decode_sub->add_option("--out", decode_cmd.out_path,
                         "output (default stdout)");
  decode_sub->add_flag("--strict", decode_cmd.strict,
                       "require every symbol in the model vocabulary");
  decode_sub->add_option("--manifest", decode_cmd.manifest_path,
                         "write a run manifest here");

  BleuCmd bleu_cmd;
  auto* bleu = app.add_subcommand("bleu", "4-gram corpus BLEU");
  bleu->add_option("--hyp", bleu_cmd.hyp_path, "hypothesis file")->required();
  bleu->add_option("--ref", bleu_cmd.ref_path, "reference file")->required();
  bleu->add_option("--space", bleu_cmd.space, "text or pron")
      ->check(CLI::IsMember({"text", "pron"}));
  bleu->add_option("--pron-token", bleu_cmd.pron_token,
                   "pronunciation tokens: unit or word")
      ->check(CLI::IsMember({"unit", "word"}));
  bleu->add_option("--smooth", bleu_cmd.smooth, "none or add1")
      ->check(CLI::IsMember({"none", "add1"}));
  bleu->add_flag("--no-lowercase", bleu_cmd.no_lowercase,
                 "keep case in text space");
  bleu->add_option("--manifest", bleu_cmd.manifest_path,
                   "write a run manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  if (show_version) {
    std::cout << "prontk " << kToolVersion << " (zh-number-table "
              << ZhNumberTable::standard().version() << ")\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help() << std::flush;
    return 1;
  }

  try {
    if (convert->parsed()) return convert_cmd.run();
    if (build->parsed()) return build_cmd.run();
    if (split->parsed()) return split_cmd.run();
    if (stats->parsed()) return stats_cmd.run();
    if (learn_bpe_sub->parsed()) return learn_bpe_cmd.run();
    if (learn_syl->parsed()) return learn_syl_cmd.run();
    if (apply->parsed()) return apply_cmd.run_apply();
    if (decode_sub->parsed()) return decode_cmd.run_decode();
    if (bleu->parsed()) return bleu_cmd.run();
    std::cerr << app.help() << std::flush;
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
