#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "negforge/morphology.hpp"
#include "negforge/sentence.hpp"

namespace negforge {

struct AuxiliaryEntry {
  std::string lemma;
  std::string fine_tag;
  MorphTarget target;
};

struct ClosedClassEntry {
  Pos pos = Pos::OTHER;
  std::string fine_tag;
};

// Word lists behind the shallow analyzer. Keys are lowercase.
struct Lexicons {
  std::map<std::string, AuxiliaryEntry, std::less<>> auxiliaries;
  std::set<std::string, std::less<>> negation_cues{"not", "n't", "never"};
  std::map<std::string, std::pair<Person, Number>, std::less<>> pronouns;
  // Whole-word splits ("won't" -> {"wo", "n't"}).
  std::map<std::string, std::vector<std::string>, std::less<>> contraction_splits;
  // Clitics split off the end of any word ("n't", "'m", ...), longest first.
  std::vector<std::string> clitic_suffixes;
  std::map<std::string, ClosedClassEntry, std::less<>> closed_class;

  static Lexicons load(const std::optional<std::filesystem::path>& dir = std::nullopt);
  static const Lexicons& builtin();
};

// Lightweight analyzer for single-clause English declaratives. It emits a flat
// dependency tree: the main verb (or the last auxiliary when there is none) is
// the root, preceding auxiliaries attach to it as "aux", negation cues attach
// to the nearest preceding auxiliary as "neg", and everything else hangs off
// the root as "dep".
class ShallowParser {
 public:
  ShallowParser() : ShallowParser(Lexicons::builtin(), morph::VerbLexicon::builtin()) {}
  ShallowParser(const Lexicons& lexicons, const morph::VerbLexicon& verbs) : lex_(&lexicons), verbs_(&verbs) {}

  [[nodiscard]] ParsedSentence analyze(std::string_view text) const;
  [[nodiscard]] bool has_auxiliary(std::string_view text) const;

  // Surface tokens with spacing, after punctuation and contraction splitting.
  [[nodiscard]] std::vector<std::pair<std::string, bool>> tokenize(std::string_view text) const;

 private:
  const Lexicons* lex_;
  const morph::VerbLexicon* verbs_;
};

inline ParsedSentence analyze(std::string_view text) { return ShallowParser().analyze(text); }
inline bool has_auxiliary(std::string_view text) { return ShallowParser().has_auxiliary(text); }

}  // namespace negforge
