#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negforge {

enum class Pos { VERB, AUX, PART, ADV, NOUN, PRON, ADJ, DET, ADP, NUM, PUNCT, OTHER };

std::string_view to_string(Pos pos) noexcept;

// Maps a Universal POS tag onto the coarse inventory. PROPN folds into NOUN,
// anything unrecognised becomes OTHER.
Pos pos_from_string(std::string_view upos) noexcept;

enum class Tense { past, present };
enum class Person { first, second, third };
enum class Number { singular, plural };
enum class VerbForm { finite, bare_infinitive, past_participle, gerund };

struct MorphTarget {
  Tense tense = Tense::present;
  Person person = Person::third;
  Number number = Number::singular;
  VerbForm verb_form = VerbForm::finite;

  static MorphTarget past() { return {Tense::past, Person::third, Number::singular, VerbForm::finite}; }
  static MorphTarget present(Person p, Number n) { return {Tense::present, p, n, VerbForm::finite}; }
  static MorphTarget form(VerbForm f) { return {Tense::present, Person::third, Number::singular, f}; }

  bool operator==(const MorphTarget&) const = default;
};

// Derives the morphological target a Penn verb tag encodes. Present tense
// non-third-person tags (VBP) fall back to `person`/`number`.
std::optional<MorphTarget> target_from_tag(std::string_view fine_tag, Person person = Person::first,
                                           Number number = Number::singular);

struct Token {
  std::size_t index = 0;  // 1-based
  std::string surface;
  std::string lemma;
  Pos coarse_pos = Pos::OTHER;
  std::string fine_tag;
  std::size_t head = 0;  // 0 = root
  std::string deprel;
  bool space_after = true;

  bool operator==(const Token&) const = default;
};

// A dependency-annotated sentence. Construction validates the tree, so every
// instance has contiguous indices, exactly one root and no head cycles.
class ParsedSentence {
 public:
  ParsedSentence(std::vector<Token> tokens, std::string text);

  [[nodiscard]] std::span<const Token> tokens() const noexcept { return tokens_; }
  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] std::size_t size() const noexcept { return tokens_.size(); }

  // 1-based access; throws InvalidArgument when out of range.
  [[nodiscard]] const Token& at(std::size_t index) const;

  bool operator==(const ParsedSentence&) const = default;

 private:
  std::vector<Token> tokens_;
  std::string text_;
};

// Tokens whose head equals `index`, in surface order.
std::vector<Token> children_of(const ParsedSentence& sentence, std::size_t index);

const Token& root_of(const ParsedSentence& sentence);

std::string detokenize(std::span<const Token> tokens);

// Checks the tree invariants without constructing a sentence; throws
// MalformedTree (or InvalidArgument for token-level defects).
void validate_tree(std::span<const Token> tokens);

// Negation-cue test shared by the negator and the analyzer: deprel "neg", or
// "advmod" whose lemma is one of not / n't / never.
bool is_negation_cue(const Token& token) noexcept;

}  // namespace negforge
