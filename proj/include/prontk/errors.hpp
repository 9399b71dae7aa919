#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace prontk {

// Base class for every error raised by the toolkit. Catching prontk::Error
// separates bad input from genuine bugs (which surface as other exceptions).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A token failed the pronunciation-unit invariant (corrupt data or a
// wrong-language file).
class InvalidUnitError : public Error {
 public:
  explicit InvalidUnitError(std::string token)
      : Error("invalid pronunciation unit: \"" + token + "\""),
        token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

// A phoneme-only operation was applied to Pinyin units (or vice versa).
class WrongKindError : public Error {
 public:
  explicit WrongKindError(const std::string& msg) : Error(msg) {}
};

// Malformed line in an input file; line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::size_t line_no, const std::string& what)
      : Error(path + ":" + std::to_string(line_no) + ": " + what),
        path_(std::move(path)),
        line_no_(line_no) {}
  const std::string& path() const noexcept { return path_; }
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::string path_;
  std::size_t line_no_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Number outside the representable range of a numeral system.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& msg) : Error(msg) {}
};

class NotANumberError : public Error {
 public:
  explicit NotANumberError(const std::string& text)
      : Error("not a number: \"" + text + "\"") {}
};

// Character missing from the Chinese numeral table.
class UnknownNumeralError : public Error {
 public:
  explicit UnknownNumeralError(std::string character)
      : Error("character not in the numeral table: \"" + character + "\""),
        character_(std::move(character)) {}
  const std::string& character() const noexcept { return character_; }

 private:
  std::string character_;
};

// More distinct pronunciation units than the reserved pseudo-character block.
class AlphabetOverflowError : public Error {
 public:
  explicit AlphabetOverflowError(const std::string& msg) : Error(msg) {}
};

class UnknownUnitError : public Error {
 public:
  explicit UnknownUnitError(std::string unit)
      : Error("unit not in the model alphabet: \"" + unit + "\""),
        unit_(std::move(unit)) {}
  const std::string& unit() const noexcept { return unit_; }

 private:
  std::string unit_;
};

class MalformedTokenError : public Error {
 public:
  explicit MalformedTokenError(std::string token)
      : Error("malformed encoded token: \"" + token + "\""),
        token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class VersionMismatchError : public Error {
 public:
  explicit VersionMismatchError(const std::string& msg) : Error(msg) {}
};

class CorruptModelError : public Error {
 public:
  explicit CorruptModelError(const std::string& msg) : Error(msg) {}
};

// Parallel files disagree in line count.
class LineCountMismatchError : public Error {
 public:
  LineCountMismatchError(std::size_t lhs, std::size_t rhs)
      : Error("parallel files disagree in length: " + std::to_string(lhs) +
              " vs " + std::to_string(rhs) + " lines") {}
};

// Requested dev/test sizes exceed the corpus.
class SpecTooLargeError : public Error {
 public:
  explicit SpecTooLargeError(const std::string& msg) : Error(msg) {}
};

class EmptyCorpusError : public Error {
 public:
  EmptyCorpusError() : Error("empty corpus") {}
};

// Hypothesis and reference corpora differ in sentence count.
class LengthMismatchError : public Error {
 public:
  LengthMismatchError(std::size_t hyp, std::size_t ref)
      : Error("hypothesis/reference count mismatch: " + std::to_string(hyp) +
              " vs " + std::to_string(ref)) {}
};

}  // namespace prontk
