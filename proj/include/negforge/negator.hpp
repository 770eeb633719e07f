#pragma once

#include <string>
#include <vector>

#include "negforge/morphology.hpp"
#include "negforge/sentence.hpp"

namespace negforge {

// Which rewrite fired. The first two remove an existing negation, the other
// three add one.
enum class Branch {
  remove_do_support = 1,    // "didn't know" -> "knew"
  remove_cue = 2,           // "have never been" -> "have been"
  add_do_support = 3,       // "enjoyed" -> "did not enjoy"
  negate_first_aux = 4,     // "will be" -> "won't be"
  negate_root_aux = 5,      // "'m very" -> "'m not very"
};

struct NegatorOptions {
  bool prefer_contractions = true;
};

struct NegationOutcome {
  std::string text;
  Branch branch = Branch::remove_cue;
  std::vector<std::string> removed_cues;  // surfaces deleted
  std::vector<std::string> added_tokens;  // surfaces inserted
  bool contracted = false;
  std::vector<Token> tokens;  // resulting annotated tokens

  [[nodiscard]] int branch_number() const noexcept { return static_cast<int>(branch); }
};

class Negator {
 public:
  explicit Negator(NegatorOptions options = {}, const morph::VerbLexicon& verbs = morph::VerbLexicon::builtin(),
                   const morph::ContractionTable& contractions = morph::ContractionTable::builtin())
      : options_(options), verbs_(&verbs), contractions_(&contractions) {}

  [[nodiscard]] bool is_negated(const ParsedSentence& sentence) const;

  // Toggles the polarity of the root clause. Throws UnsupportedStructure when
  // no rewrite applies or the sentence carries more than one negation cue.
  [[nodiscard]] NegationOutcome negate(const ParsedSentence& sentence) const;

  [[nodiscard]] const NegatorOptions& options() const noexcept { return options_; }

 private:
  NegationOutcome remove_negation(const ParsedSentence& sentence, const Token& cue) const;
  NegationOutcome add_negation(const ParsedSentence& sentence) const;

  NegatorOptions options_;
  const morph::VerbLexicon* verbs_;
  const morph::ContractionTable* contractions_;
};

bool is_negated(const ParsedSentence& sentence);
NegationOutcome negate(const ParsedSentence& sentence, const NegatorOptions& options = {});

}  // namespace negforge
