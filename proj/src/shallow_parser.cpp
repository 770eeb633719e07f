#include "negforge/shallow_parser.hpp"

#include <algorithm>
#include <cctype>

#include "negforge/error.hpp"
#include "negforge/resources.hpp"

namespace negforge {

namespace {

using morph::to_lower;

Tense parse_tense(const std::string& s) { return s == "past" ? Tense::past : Tense::present; }

Person parse_person(const std::string& s) {
  if (s == "first") return Person::first;
  if (s == "second") return Person::second;
  return Person::third;
}

Number parse_number(const std::string& s) { return s == "plural" ? Number::plural : Number::singular; }

VerbForm parse_verb_form(const std::string& s) {
  if (s == "bare_infinitive") return VerbForm::bare_infinitive;
  if (s == "past_participle") return VerbForm::past_participle;
  if (s == "gerund") return VerbForm::gerund;
  return VerbForm::finite;
}

bool is_punct_char(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"' || c == '(' ||
         c == ')' || c == '[' || c == ']' || c == '{' || c == '}';
}

bool is_leading_punct(char c) { return c == '"' || c == '(' || c == '[' || c == '{'; }

std::string punct_tag(std::string_view s) {
  if (s == "." || s == "!" || s == "?" || s == "...") return ".";
  if (s == ",") return ",";
  if (s == ";" || s == ":") return ":";
  if (s == "(" || s == "[" || s == "{") return "-LRB-";
  if (s == ")" || s == "]" || s == "}") return "-RRB-";
  if (s == "\"") return "''";
  return "SYM";
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) || c == ',' || c == '.'; }) &&
         std::isdigit(static_cast<unsigned char>(s.front()));
}

// What a word could be if it is a verb.
struct VerbGuess {
  std::string lemma;
  std::string tag;  // best standalone tag
  bool bare = false;
  bool past = false;
  bool participle = false;
  bool gerund = false;
};

enum class Role { none, punct, neg, aux, deferred_aux, clitic_s, clitic_d, pronoun, closed, number, other };

struct Word {
  std::string surface;
  bool space_after = true;
  std::string lower;
  Role role = Role::none;
  const AuxiliaryEntry* aux = nullptr;
  std::optional<VerbGuess> verb;
  Pos pos = Pos::NOUN;
  std::string tag = "NN";
  std::string lemma;
  bool is_aux = false;      // auxiliary in the verb chain
  bool is_main = false;     // main verb of the clause
  bool infinitive = false;  // verb governed by "to"
};

}  // namespace

Lexicons Lexicons::load(const std::optional<std::filesystem::path>& dir) {
  Lexicons lex;
  for (auto& row : parse_tsv_rows(load_lexicon_file("auxiliaries.tsv", dir), "auxiliaries.tsv", 7)) {
    MorphTarget t{parse_tense(row[3]), parse_person(row[4]), parse_number(row[5]), parse_verb_form(row[6])};
    lex.auxiliaries[to_lower(row[0])] = AuxiliaryEntry{row[1], row[2], t};
  }
  for (auto& row : parse_tsv_rows(load_lexicon_file("pronouns.tsv", dir), "pronouns.tsv", 3)) {
    lex.pronouns[to_lower(row[0])] = {parse_person(row[1]), parse_number(row[2])};
  }
  for (auto& row : parse_tsv_rows(load_lexicon_file("contraction_splits.tsv", dir), "contraction_splits.tsv", 3)) {
    std::vector<std::string> pieces;
    std::string joined;
    std::size_t start = 0;
    const std::string& spec = row[2];
    while (start <= spec.size()) {
      auto sp = spec.find(' ', start);
      if (sp == std::string::npos) sp = spec.size();
      if (sp > start) {
        pieces.push_back(spec.substr(start, sp - start));
        joined += pieces.back();
      }
      start = sp + 1;
    }
    if (to_lower(joined) != to_lower(row[1])) {
      throw InvalidArgument("contraction_splits.tsv: pieces of '" + row[1] + "' do not reproduce it");
    }
    if (row[0] == "word") {
      lex.contraction_splits[to_lower(row[1])] = std::move(pieces);
    } else if (row[0] == "suffix") {
      lex.clitic_suffixes.push_back(to_lower(row[1]));
    } else {
      throw InvalidArgument("contraction_splits.tsv: unknown kind '" + row[0] + "'");
    }
  }
  std::sort(lex.clitic_suffixes.begin(), lex.clitic_suffixes.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  for (auto& row : parse_tsv_rows(load_lexicon_file("closed_class.tsv", dir), "closed_class.tsv", 3)) {
    lex.closed_class[to_lower(row[0])] = ClosedClassEntry{pos_from_string(row[1]), row[2]};
  }
  return lex;
}

const Lexicons& Lexicons::builtin() {
  static const Lexicons lex = load();
  return lex;
}

std::vector<std::pair<std::string, bool>> ShallowParser::tokenize(std::string_view text) const {
  std::vector<std::pair<std::string, bool>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    const bool space = end < text.size();
    pos = end;

    while (chunk.size() > 1 && is_leading_punct(chunk.front())) {
      out.emplace_back(std::string(1, chunk.front()), false);
      chunk.remove_prefix(1);
    }
    std::vector<std::string> trailing;
    while (chunk.size() > 1 && is_punct_char(chunk.back())) {
      if (chunk.ends_with("...") && chunk.size() > 3) {
        trailing.emplace_back("...");
        chunk.remove_suffix(3);
      } else {
        trailing.emplace_back(1, chunk.back());
        chunk.remove_suffix(1);
      }
    }
    std::reverse(trailing.begin(), trailing.end());

    std::vector<std::string> pieces;
    const std::string lower = to_lower(chunk);
    if (auto it = lex_->contraction_splits.find(lower); it != lex_->contraction_splits.end()) {
      std::size_t offset = 0;
      for (const auto& p : it->second) {
        pieces.emplace_back(chunk.substr(offset, p.size()));
        offset += p.size();
      }
    } else {
      bool split = false;
      for (const auto& suffix : lex_->clitic_suffixes) {
        if (lower.size() > suffix.size() && lower.ends_with(suffix)) {
          pieces.emplace_back(chunk.substr(0, chunk.size() - suffix.size()));
          pieces.emplace_back(chunk.substr(chunk.size() - suffix.size()));
          split = true;
          break;
        }
      }
      if (!split) pieces.emplace_back(chunk);
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const bool last = i + 1 == pieces.size() && trailing.empty();
      out.emplace_back(std::move(pieces[i]), last ? space : false);
    }
    for (std::size_t i = 0; i < trailing.size(); ++i) {
      out.emplace_back(std::move(trailing[i]), i + 1 == trailing.size() ? space : false);
    }
  }
  return out;
}

bool ShallowParser::has_auxiliary(std::string_view text) const {
  for (const auto& [surface, space] : tokenize(text)) {
    if (lex_->auxiliaries.contains(to_lower(surface))) return true;
  }
  return false;
}

ParsedSentence ShallowParser::analyze(std::string_view raw) const {
  std::string_view text = raw;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InvalidArgument("empty sentence");

  std::vector<Word> words;
  for (auto& [surface, space] : tokenize(text)) {
    Word w;
    w.surface = std::move(surface);
    w.space_after = space;
    w.lower = to_lower(w.surface);
    words.push_back(std::move(w));
  }
  if (!words.empty() && words.back().surface == "?") {
    throw UnsupportedSentence("questions are not supported: '" + std::string(text) + "'");
  }

  auto guess_verb = [&](const std::string& w) -> std::optional<VerbGuess> {
    VerbGuess g;
    if (auto lemma = verbs_->irregular_lemma(w)) {
      const morph::VerbForms* f = verbs_->irregular(*lemma);
      g.lemma = *lemma;
      g.bare = w == *lemma;
      g.past = w == f->past;
      g.participle = w == f->past_participle;
      g.gerund = w == f->gerund;
      if (g.past) g.tag = "VBD";
      else if (w == f->third_singular) g.tag = "VBZ";
      else if (g.gerund) g.tag = "VBG";
      else if (g.bare) g.tag = "VBP";
      else g.tag = "VBN";
      return g;
    }
    if (verbs_->is_known_lemma(w)) {
      g.lemma = w;
      g.bare = true;
      g.tag = "VBP";
      return g;
    }
    const std::string lemma = morph::lemmatize_verb(w, *verbs_);
    const bool known = lemma != w && verbs_->is_known_lemma(lemma);
    if (w.size() > 4 && w.ends_with("ed")) {
      g = VerbGuess{lemma, "VBD", false, true, true, false};
      return g;
    }
    if (w.size() > 5 && w.ends_with("ing")) {
      g = VerbGuess{lemma, "VBG", false, false, false, true};
      return g;
    }
    if (known && w.ends_with("s")) {
      g = VerbGuess{lemma, "VBZ"};
      return g;
    }
    return std::nullopt;
  };

  // Base classification, independent of context.
  for (Word& w : words) {
    if (std::all_of(w.surface.begin(), w.surface.end(), [](char c) { return is_punct_char(c); })) {
      w.role = Role::punct;
      w.pos = Pos::PUNCT;
      w.tag = punct_tag(w.surface);
      w.lemma = w.surface;
    } else if (lex_->negation_cues.contains(w.lower)) {
      w.role = Role::neg;
      w.pos = w.lower == "never" ? Pos::ADV : Pos::PART;
      w.tag = "RB";
      w.lemma = w.lower == "never" ? "never" : "not";
    } else if (w.lower == "'s") {
      w.role = Role::clitic_s;
    } else if (w.lower == "'d") {
      w.role = Role::clitic_d;
    } else if (auto it = lex_->auxiliaries.find(w.lower); it != lex_->auxiliaries.end()) {
      w.aux = &it->second;
      const std::string& lemma = it->second.lemma;
      w.role = (lemma == "do" || lemma == "have" || lemma == "need") ? Role::deferred_aux : Role::aux;
      w.lemma = lemma;
      w.tag = it->second.fine_tag;
    } else if (lex_->pronouns.contains(w.lower)) {
      w.role = Role::pronoun;
      w.pos = Pos::PRON;
      w.tag = (w.lower == "what" || w.lower == "who" || w.lower == "which") ? "WP" : "PRP";
      w.lemma = w.lower == "i" ? "I" : w.lower;
    } else if (all_digits(w.surface)) {
      w.role = Role::number;
      w.pos = Pos::NUM;
      w.tag = "CD";
      w.lemma = w.surface;
    } else {
      w.verb = guess_verb(w.lower);
      if (auto it = lex_->closed_class.find(w.lower); it != lex_->closed_class.end()) {
        w.role = Role::closed;
        w.pos = it->second.pos;
        w.tag = it->second.fine_tag;
      } else {
        w.role = Role::other;
        if (w.lower.size() > 3 && w.lower.ends_with("ly")) {
          w.pos = Pos::ADV;
          w.tag = "RB";
        } else {
          w.pos = Pos::NOUN;
          w.tag = w.lower.ends_with("s") && !w.lower.ends_with("ss") ? "NNS" : "NN";
          if (&w != &words.front() && std::isupper(static_cast<unsigned char>(w.surface.front()))) w.tag = "NNP";
        }
      }
      w.lemma = w.lower;
    }
  }

  auto skippable = [](const Word& w) { return w.pos == Pos::ADV || w.role == Role::neg; };
  auto next_significant = [&](std::size_t i) -> std::size_t {
    std::size_t j = i + 1;
    while (j < words.size() && skippable(words[j])) ++j;
    return j;
  };
  auto prev_significant = [&](std::size_t i) -> std::optional<std::size_t> {
    std::size_t j = i;
    while (j > 0) {
      --j;
      if (!skippable(words[j])) return j;
    }
    return std::nullopt;
  };
  auto is_be_aux = [](const Word& w) { return w.is_aux && w.lemma == "be"; };
  auto is_have_aux = [](const Word& w) { return w.is_aux && w.lemma == "have"; };

  std::optional<std::size_t> main_verb;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Word& w = words[i];
    const auto prev = prev_significant(i);
    const bool after_to = prev && words[*prev].lower == "to";
    const bool chain_open = !main_verb.has_value();

    if (after_to && (w.verb || w.aux)) {
      w.infinitive = true;
      w.pos = (w.aux && w.lemma == "be") ? Pos::AUX : Pos::VERB;
      w.tag = "VB";
      w.lemma = w.verb ? w.verb->lemma : w.aux->lemma;
      continue;
    }

    switch (w.role) {
      case Role::aux:
        w.pos = Pos::AUX;
        w.is_aux = chain_open;
        break;
      case Role::deferred_aux: {
        const std::size_t j = next_significant(i);
        bool auxiliary = false;
        if (j < words.size()) {
          const Word& n = words[j];
          if (w.lemma == "need") {
            auxiliary = i + 1 < words.size() && words[i + 1].role == Role::neg;
          } else if (w.lemma == "have") {
            auxiliary = (n.verb && n.verb->participle) || (n.aux && n.aux->lemma == "be" && n.lower == "been");
          } else {
            auxiliary = (n.verb && (n.verb->bare || n.verb->participle)) || n.role == Role::deferred_aux ||
                        (n.aux && n.aux->lemma == "be" && n.lower == "be");
          }
        }
        if (auxiliary) {
          w.pos = Pos::AUX;
          w.is_aux = chain_open;
        } else if (chain_open) {
          w.pos = Pos::VERB;
          w.is_main = true;
          if (w.tag == "MD") w.tag = "VBP";
          main_verb = i;
        } else {
          w.pos = Pos::VERB;
        }
        break;
      }
      case Role::clitic_s: {
        const bool host_pronoun = i > 0 && (words[i - 1].role == Role::pronoun || words[i - 1].lower == "there" ||
                                            words[i - 1].lower == "here");
        bool verb_later = false;
        for (std::size_t k = i + 1; k < words.size(); ++k) {
          if (words[k].aux || words[k].role == Role::deferred_aux || (words[k].verb && words[k].role == Role::other)) {
            verb_later = true;
          }
        }
        if (!host_pronoun && verb_later) {
          w.pos = Pos::PART;
          w.tag = "POS";
          w.lemma = "'s";
          break;
        }
        const std::size_t j = next_significant(i);
        // "'s got" is the British perfect of get
        const bool perfect = j < words.size() &&
                             (verbs_->is_irregular_past_participle(words[j].lower) || words[j].lower == "got");
        w.lemma = perfect ? "have" : "be";
        w.aux = &lex_->auxiliaries.at(perfect ? "has" : "is");
        w.tag = "VBZ";
        w.pos = Pos::AUX;
        w.is_aux = chain_open;
        break;
      }
      case Role::clitic_d: {
        const std::size_t j = next_significant(i);
        const bool perfect = j < words.size() && verbs_->is_irregular_past_participle(words[j].lower);
        w.lemma = perfect ? "have" : "would";
        w.aux = &lex_->auxiliaries.at(perfect ? "had" : "would");
        w.tag = perfect ? "VBD" : "MD";
        w.pos = Pos::AUX;
        w.is_aux = chain_open;
        break;
      }
      default:
        break;
    }
    if (w.role == Role::aux || w.role == Role::deferred_aux || w.role == Role::clitic_s || w.role == Role::clitic_d ||
        !w.verb || !chain_open) {
      continue;
    }

    // Open-class verb candidate: accept it as the main verb when it follows a
    // subject or an auxiliary.
    if (!prev) continue;
    const Word& p = words[*prev];
    const bool after_aux = p.is_aux;
    const bool after_subject = p.pos == Pos::PRON || (p.pos == Pos::NOUN && p.role == Role::other) || p.pos == Pos::NUM;
    if (!after_aux && !after_subject) continue;
    const VerbGuess& g = *w.verb;
    if (g.gerund && !(after_aux && is_be_aux(p))) continue;
    if (!after_aux && !(g.bare || g.past || g.tag == "VBZ")) continue;

    w.pos = Pos::VERB;
    w.lemma = g.lemma;
    w.is_main = true;
    if (after_aux && (is_have_aux(p) || is_be_aux(p)) && g.participle) {
      w.tag = "VBN";
    } else if (after_aux && is_be_aux(p) && g.gerund) {
      w.tag = "VBG";
    } else if (after_aux && g.bare) {
      w.tag = "VB";
    } else {
      w.tag = g.tag;
    }
    main_verb = i;
  }

  std::optional<std::size_t> root = main_verb;
  if (!root) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].is_aux) root = i;
    }
  }
  if (!root) throw UnsupportedSentence("no verb found in '" + std::string(text) + "'");
  words[*root].is_aux = false;

  std::vector<Token> tokens;
  tokens.reserve(words.size());
  const std::size_t root_index = *root + 1;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    Token t;
    t.index = i + 1;
    t.surface = w.surface;
    t.lemma = w.lemma.empty() ? w.lower : w.lemma;
    t.coarse_pos = w.pos;
    t.fine_tag = w.tag;
    t.space_after = w.space_after;
    if (i == *root) {
      t.head = 0;
      t.deprel = "root";
    } else if (w.role == Role::neg) {
      t.head = root_index;
      for (std::size_t k = i; k > 0; --k) {
        if (words[k - 1].is_aux || k - 1 == *root) {
          t.head = k;
          break;
        }
      }
      t.deprel = "neg";
    } else if (w.is_aux && i < *root) {
      t.head = root_index;
      t.deprel = "aux";
    } else {
      t.head = root_index;
      t.deprel = "dep";
    }
    tokens.push_back(std::move(t));
  }
  return ParsedSentence(std::move(tokens), std::string(text));
}

}  // namespace negforge
