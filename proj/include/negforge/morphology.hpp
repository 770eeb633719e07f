#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "negforge/sentence.hpp"

namespace negforge::morph {

struct VerbForms {
  std::string past;
  std::string third_singular;
  std::string past_participle;
  std::string gerund;
};

// Irregular verb paradigms plus a list of known regular lemmas. "be" is kept
// out of the table and handled by its own paradigm.
class VerbLexicon {
 public:
  static VerbLexicon load(const std::optional<std::filesystem::path>& dir = std::nullopt);
  // Shared instance built from the bundled data (or $NEGFORGE_LEXICON_DIR).
  static const VerbLexicon& builtin();

  [[nodiscard]] const VerbForms* irregular(std::string_view lemma) const;
  // Lemma for any listed irregular form (including the lemma itself).
  [[nodiscard]] std::optional<std::string> irregular_lemma(std::string_view form) const;
  [[nodiscard]] bool is_known_lemma(std::string_view lemma) const;
  [[nodiscard]] bool is_irregular_past_participle(std::string_view form) const;

  [[nodiscard]] const std::map<std::string, VerbForms, std::less<>>& irregulars() const { return irregulars_; }

 private:
  std::map<std::string, VerbForms, std::less<>> irregulars_;
  std::map<std::string, std::string, std::less<>> form_to_lemma_;
  std::set<std::string, std::less<>> participles_;
  std::set<std::string, std::less<>> regular_;
};

// Auxiliary -> negative contraction ("will" -> "won't") and its inverse.
class ContractionTable {
 public:
  static ContractionTable load(const std::optional<std::filesystem::path>& dir = std::nullopt);
  static const ContractionTable& builtin();

  [[nodiscard]] std::optional<std::string> contract(std::string_view aux) const;
  [[nodiscard]] std::optional<std::string> expand(std::string_view contracted) const;
  // Full auxiliary for the host half of a split contraction ("wo" -> "will").
  [[nodiscard]] std::optional<std::string> host_to_auxiliary(std::string_view host) const;

  [[nodiscard]] const std::map<std::string, std::string, std::less<>>& entries() const { return forward_; }

 private:
  std::map<std::string, std::string, std::less<>> forward_;
  std::map<std::string, std::string, std::less<>> reverse_;
  std::map<std::string, std::string, std::less<>> hosts_;
};

// Unknown forms come back unchanged.
std::string lemmatize_verb(std::string_view form, const VerbLexicon& lex = VerbLexicon::builtin());

std::string inflect_verb(std::string_view lemma, const MorphTarget& target,
                         const VerbLexicon& lex = VerbLexicon::builtin());

// "did", "does" or "do".
std::string conjugate_do(const MorphTarget& target);

// nullopt means the auxiliary has no negative contraction ("am") and the
// caller must write "not" as a separate word.
std::optional<std::string> contract_negation(std::string_view aux_surface,
                                             const ContractionTable& table = ContractionTable::builtin());

// Rewrites every negative contraction in whitespace-separated text into its
// "aux not" form ("I won't go" -> "I will not go", "I can't" -> "I can not").
std::string expand_negative_contractions(std::string_view text,
                                         const ContractionTable& table = ContractionTable::builtin());

// Case helpers shared with the analyzer and the negator (ASCII only).
std::string to_lower(std::string_view s);
std::string match_case(std::string_view replacement, std::string_view model);

}  // namespace negforge::morph
