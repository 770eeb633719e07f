#include "negforge/sentence.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "negforge/error.hpp"

namespace negforge {

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 12> kPosNames{{
    {Pos::VERB, "VERB"},
    {Pos::AUX, "AUX"},
    {Pos::PART, "PART"},
    {Pos::ADV, "ADV"},
    {Pos::NOUN, "NOUN"},
    {Pos::PRON, "PRON"},
    {Pos::ADJ, "ADJ"},
    {Pos::DET, "DET"},
    {Pos::ADP, "ADP"},
    {Pos::NUM, "NUM"},
    {Pos::PUNCT, "PUNCT"},
    {Pos::OTHER, "X"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Pos pos) noexcept {
  for (const auto& [p, name] : kPosNames) {
    if (p == pos) return name;
  }
  return "X";
}

Pos pos_from_string(std::string_view upos) noexcept {
  if (upos == "PROPN") return Pos::NOUN;
  for (const auto& [p, name] : kPosNames) {
    if (name == upos) return p;
  }
  return Pos::OTHER;
}

std::optional<MorphTarget> target_from_tag(std::string_view tag, Person person, Number number) {
  if (tag == "VBD") return MorphTarget::past();
  if (tag == "VBZ") return MorphTarget::present(Person::third, Number::singular);
  if (tag == "VBP") {
    if (person == Person::third && number == Number::singular) number = Number::plural;
    return MorphTarget::present(person, number);
  }
  if (tag == "VB" || tag == "MD") return MorphTarget::form(VerbForm::bare_infinitive);
  if (tag == "VBN") return MorphTarget::form(VerbForm::past_participle);
  if (tag == "VBG") return MorphTarget::form(VerbForm::gerund);
  return std::nullopt;
}

void validate_tree(std::span<const Token> tokens) {
  const std::size_t n = tokens.size();
  if (n == 0) throw MalformedTree("sentence has no tokens");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (t.index != i + 1) {
      throw MalformedTree("token indices must run 1.." + std::to_string(n) + " without gaps (found " +
                          std::to_string(t.index) + " at position " + std::to_string(i + 1) + ")");
    }
    if (t.surface.empty()) throw InvalidArgument("token " + std::to_string(t.index) + " has an empty surface");
    if (t.head == t.index) throw MalformedTree("token " + std::to_string(t.index) + " is its own head");
    if (t.head > n) throw MalformedTree("token " + std::to_string(t.index) + " points at missing head " + std::to_string(t.head));
    if (t.head == 0) ++roots;
  }
  if (roots != 1) throw MalformedTree("expected exactly one root, found " + std::to_string(roots));
  // Every token must reach the root within n steps.
  for (const Token& t : tokens) {
    std::size_t cur = t.index;
    std::size_t steps = 0;
    while (cur != 0) {
      if (++steps > n) throw MalformedTree("head cycle through token " + std::to_string(t.index));
      cur = tokens[cur - 1].head;
    }
  }
}

ParsedSentence::ParsedSentence(std::vector<Token> tokens, std::string text)
    : tokens_(std::move(tokens)), text_(std::move(text)) {
  validate_tree(tokens_);
}

const Token& ParsedSentence::at(std::size_t index) const {
  if (index == 0 || index > tokens_.size()) {
    throw InvalidArgument("token index " + std::to_string(index) + " outside 1.." + std::to_string(tokens_.size()));
  }
  return tokens_[index - 1];
}

std::vector<Token> children_of(const ParsedSentence& sentence, std::size_t index) {
  (void)sentence.at(index);
  std::vector<Token> out;
  for (const Token& t : sentence.tokens()) {
    if (t.head == index) out.push_back(t);
  }
  return out;
}

const Token& root_of(const ParsedSentence& sentence) {
  const Token* root = nullptr;
  for (const Token& t : sentence.tokens()) {
    if (t.head != 0) continue;
    if (root != nullptr) throw MalformedTree("multiple roots");
    root = &t;
  }
  if (root == nullptr) throw MalformedTree("no root");
  return *root;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += tokens[i].surface;
    if (tokens[i].space_after && i + 1 < tokens.size()) out += ' ';
  }
  return out;
}

bool is_negation_cue(const Token& token) noexcept {
  if (token.deprel == "neg") return true;
  if (token.deprel != "advmod") return false;
  const std::string lemma = lower(token.lemma.empty() || token.lemma == "_" ? token.surface : token.lemma);
  return lemma == "not" || lemma == "n't" || lemma == "never";
}

}  // namespace negforge
