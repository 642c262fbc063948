#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rrgqa {

/// Base class for every error raised by the library. `kind()` is a short
/// stable tag that tests and the CLI can switch on.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Malformed lexicon or bAbI input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse", "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class LexiconError : public Error {
public:
  using Error::Error;
};

class SemanticsError : public Error {
public:
  using Error::Error;
};

/// Raised by the matcher. Kinds: unknown-word, meaningless, incomplete,
/// inconsistent-aux.
class MatchError : public Error {
public:
  MatchError(std::string kind, const std::string& what, std::size_t position = 0)
      : Error(std::move(kind), what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class ContextError : public Error {
public:
  using Error::Error;
};

class GenerationError : public Error {
public:
  using Error::Error;
};

}  // namespace rrgqa
