#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "negforge/negator.hpp"
#include "negforge/sentence.hpp"
#include "negforge/shallow_parser.hpp"

namespace negforge {

enum class ParserKind { builtin, conllu_fixture, external_command };

ParserKind parser_kind_from_string(std::string_view name);

class SentenceParser {
 public:
  virtual ~SentenceParser() = default;
  [[nodiscard]] virtual ParsedSentence parse(std::string_view text) const = 0;
  // Default parses one at a time; the external command overrides this to
  // start a single process per batch.
  [[nodiscard]] virtual std::vector<ParsedSentence> parse_batch(const std::vector<std::string>& texts) const;
};

class BuiltinParser : public SentenceParser {
 public:
  BuiltinParser() = default;
  explicit BuiltinParser(ShallowParser parser) : parser_(std::move(parser)) {}
  [[nodiscard]] ParsedSentence parse(std::string_view text) const override;

 private:
  ShallowParser parser_;
};

// Looks sentences up by text in a pre-parsed CoNLL-U file.
class ConlluFixtureParser : public SentenceParser {
 public:
  explicit ConlluFixtureParser(const std::string& path);
  explicit ConlluFixtureParser(std::vector<ParsedSentence> sentences);
  [[nodiscard]] ParsedSentence parse(std::string_view text) const override;
  [[nodiscard]] std::size_t size() const noexcept { return by_text_.size(); }

 private:
  std::map<std::string, ParsedSentence, std::less<>> by_text_;
};

// Runs `command` through the shell, writes one sentence per line and reads
// CoNLL-U back, one sentence block per input line.
class ExternalCommandParser : public SentenceParser {
 public:
  explicit ExternalCommandParser(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(60))
      : command_(std::move(command)), timeout_(timeout) {}
  [[nodiscard]] ParsedSentence parse(std::string_view text) const override;
  [[nodiscard]] std::vector<ParsedSentence> parse_batch(const std::vector<std::string>& texts) const override;

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

struct ParserConfig {
  ParserKind kind = ParserKind::builtin;
  std::string conllu_path;       // conllu_fixture
  std::string external_command;  // external_command
  std::chrono::milliseconds timeout = std::chrono::seconds(60);
};

std::unique_ptr<SentenceParser> make_parser(const ParserConfig& config);

// Parse then negate. Failures come back as StageError naming the stage;
// empty input is an InvalidArgument.
NegationOutcome negate_text(std::string_view text, const SentenceParser& parser, const Negator& negator);
NegationOutcome negate_text(std::string_view text, const NegatorOptions& options = {});

}  // namespace negforge
