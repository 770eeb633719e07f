#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace negforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Dependency tree violates the single-root / acyclic / contiguous-index rules.
class MalformedTree : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The shallow analyzer refuses input outside its supported clause shapes.
class UnsupportedSentence : public Error {
 public:
  using Error::Error;
};

// The negator found no applicable rewrite for a parsed sentence.
class UnsupportedStructure : public Error {
 public:
  using Error::Error;
};

class AdapterError : public Error {
 public:
  using Error::Error;
};

enum class Stage { parse, negate };

inline const char* to_string(Stage s) { return s == Stage::parse ? "parse" : "negate"; }

// Wraps an error from one stage of a parse-then-negate run.
class StageError : public Error {
 public:
  StageError(Stage stage, std::string reason)
      : Error(std::string(to_string(stage)) + ": " + reason), stage_(stage), reason_(std::move(reason)) {}

  [[nodiscard]] Stage stage() const noexcept { return stage_; }
  [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

 private:
  Stage stage_;
  std::string reason_;
};

}  // namespace negforge
