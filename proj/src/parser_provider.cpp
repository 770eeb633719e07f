#include "negforge/parser_provider.hpp"

#include <fstream>
#include <optional>

#include <sys/wait.h>

#include "negforge/conllu.hpp"
#include "negforge/error.hpp"
#include "negforge/subprocess.hpp"

namespace negforge {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ParserKind parser_kind_from_string(std::string_view name) {
  if (name == "builtin") return ParserKind::builtin;
  if (name == "conllu" || name == "conllu_fixture") return ParserKind::conllu_fixture;
  if (name == "external-cmd" || name == "external_command") return ParserKind::external_command;
  throw InvalidArgument("unknown parser provider: " + std::string(name));
}

std::vector<ParsedSentence> SentenceParser::parse_batch(const std::vector<std::string>& texts) const {
  std::vector<ParsedSentence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

ParsedSentence BuiltinParser::parse(std::string_view text) const { return parser_.analyze(text); }

ConlluFixtureParser::ConlluFixtureParser(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CoNLL-U file: " + path);
  for (auto& s : conllu::parse(in).sentences) {
    std::string key = trim(s.text());
    by_text_.emplace(std::move(key), std::move(s));
  }
}

ConlluFixtureParser::ConlluFixtureParser(std::vector<ParsedSentence> sentences) {
  for (auto& s : sentences) {
    std::string key = trim(s.text());
    by_text_.emplace(std::move(key), std::move(s));
  }
}

ParsedSentence ConlluFixtureParser::parse(std::string_view text) const {
  const auto it = by_text_.find(trim(text));
  if (it == by_text_.end()) throw UnsupportedSentence("sentence not in CoNLL-U fixture: " + std::string(text));
  return it->second;
}

ParsedSentence ExternalCommandParser::parse(std::string_view text) const {
  return parse_batch({std::string(text)}).front();
}

std::vector<ParsedSentence> ExternalCommandParser::parse_batch(const std::vector<std::string>& texts) const {
  if (texts.empty()) return {};
  std::string input;
  for (const auto& t : texts) {
    if (t.find('\n') != std::string::npos) throw InvalidArgument("sentence contains a newline");
    input += t;
    input += '\n';
  }
  Subprocess child(command_);
  child.write(input);
  child.close_stdin();
  const auto output = child.drain(Subprocess::Clock::now() + timeout_);
  const int status = child.terminate();
  if (!output) throw Error("external parser timed out: " + command_);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error("external parser failed (status " + std::to_string(status) + "): " + command_);
  auto doc = conllu::parse(*output);
  if (doc.sentences.size() != texts.size())
    throw Error("external parser returned " + std::to_string(doc.sentences.size()) + " sentences for " +
                std::to_string(texts.size()) + " inputs");
  return std::move(doc.sentences);
}

std::unique_ptr<SentenceParser> make_parser(const ParserConfig& config) {
  switch (config.kind) {
    case ParserKind::builtin:
      return std::make_unique<BuiltinParser>();
    case ParserKind::conllu_fixture:
      if (config.conllu_path.empty()) throw InvalidArgument("conllu parser needs a file path");
      return std::make_unique<ConlluFixtureParser>(config.conllu_path);
    case ParserKind::external_command:
      if (config.external_command.empty()) throw InvalidArgument("external parser needs a command");
      return std::make_unique<ExternalCommandParser>(config.external_command, config.timeout);
  }
  throw InvalidArgument("unknown parser kind");
}

NegationOutcome negate_text(std::string_view text, const SentenceParser& parser, const Negator& negator) {
  if (trim(text).empty()) throw InvalidArgument("empty input sentence");
  std::optional<ParsedSentence> parsed;
  try {
    parsed.emplace(parser.parse(text));
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(Stage::parse, e.what());
  }
  try {
    return negator.negate(*parsed);
  } catch (const std::exception& e) {
    throw StageError(Stage::negate, e.what());
  }
}

NegationOutcome negate_text(std::string_view text, const NegatorOptions& options) {
  static const BuiltinParser parser;
  return negate_text(text, parser, Negator(options));
}

}  // namespace negforge
