#include "negforge/morphology.hpp"

#include <algorithm>
#include <initializer_list>
#include <cctype>

#include "negforge/error.hpp"
#include "negforge/resources.hpp"

namespace negforge::morph {

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

std::size_t vowel_groups(std::string_view w) {
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c) || (c == 'y' && in_group);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

// Single-syllable consonant-vowel-consonant stems double their final
// consonant before -ed / -ing ("stop" -> "stopped").
bool doubles_final_consonant(std::string_view w) {
  if (w.size() < 3) return false;
  const char last = w[w.size() - 1];
  const char mid = w[w.size() - 2];
  const char first = w[w.size() - 3];
  if (is_vowel(last) || last == 'w' || last == 'x' || last == 'y') return false;
  if (!is_vowel(mid) || is_vowel(first)) return false;
  return vowel_groups(w) == 1;
}

std::string regular_past(std::string_view lemma) {
  std::string w(lemma);
  if (ends_with(w, "e")) return w + "d";
  if (w.size() > 1 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) return w.substr(0, w.size() - 1) + "ied";
  if (doubles_final_consonant(w)) return w + w.back() + "ed";
  return w + "ed";
}

std::string regular_third_singular(std::string_view lemma) {
  std::string w(lemma);
  if (w.size() > 1 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) return w.substr(0, w.size() - 1) + "ies";
  if (ends_with(w, "s") || ends_with(w, "x") || ends_with(w, "z") || ends_with(w, "ch") || ends_with(w, "sh") ||
      ends_with(w, "o")) {
    return w + "es";
  }
  return w + "s";
}

std::string regular_gerund(std::string_view lemma) {
  std::string w(lemma);
  if (ends_with(w, "ie")) return w.substr(0, w.size() - 2) + "ying";
  if (ends_with(w, "e") && !ends_with(w, "ee") && !ends_with(w, "ye") && !ends_with(w, "oe") && w.size() > 2) {
    return w.substr(0, w.size() - 1) + "ing";
  }
  if (doubles_final_consonant(w)) return w + w.back() + "ing";
  return w + "ing";
}

// Picks a lemma for a stem left after stripping -ed / -ing.
std::string repair_stem(const std::string& stem, const VerbLexicon& lex) {
  if (lex.is_known_lemma(stem)) return stem;
  if (lex.is_known_lemma(stem + "e")) return stem + "e";
  if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
    const std::string undoubled = stem.substr(0, stem.size() - 1);
    if (lex.is_known_lemma(undoubled)) return undoubled;
    const char c = stem.back();
    if (c != 'l' && c != 's' && c != 'z' && c != 'f') return undoubled;
  }
  // Unknown stems: restore a silent e after a consonant-vowel-consonant tail
  // such as "hop" -> "hope" only when the stem looks monosyllabic.
  if (stem.size() >= 3 && vowel_groups(stem) == 1 && !is_vowel(stem.back()) && is_vowel(stem[stem.size() - 2]) &&
      !is_vowel(stem[stem.size() - 3]) && stem.back() != 'w' && stem.back() != 'x' && stem.back() != 'y') {
    return stem + "e";
  }
  return stem;
}

std::string inflect_be(const MorphTarget& t) {
  switch (t.verb_form) {
    case VerbForm::bare_infinitive: return "be";
    case VerbForm::past_participle: return "been";
    case VerbForm::gerund: return "being";
    case VerbForm::finite: break;
  }
  if (t.tense == Tense::past) {
    return (t.number == Number::singular && t.person != Person::second) ? "was" : "were";
  }
  if (t.number == Number::singular && t.person == Person::first) return "am";
  if (t.number == Number::singular && t.person == Person::third) return "is";
  return "are";
}

std::optional<std::string> lemma_of_be(std::string_view w) {
  static const std::set<std::string_view> forms{"be", "am", "is", "are", "was", "were", "been", "being"};
  if (forms.contains(w)) return std::string("be");
  return std::nullopt;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string match_case(std::string_view replacement, std::string_view model) {
  std::string out(replacement);
  if (model.empty() || out.empty()) return out;
  const bool all_upper = model.size() > 1 && std::all_of(model.begin(), model.end(), [](unsigned char c) {
                           return !std::isalpha(c) || std::isupper(c);
                         });
  if (all_upper) {
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  } else if (std::isupper(static_cast<unsigned char>(model.front()))) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

VerbLexicon VerbLexicon::load(const std::optional<std::filesystem::path>& dir) {
  VerbLexicon lex;
  const std::string irregular = load_lexicon_file("irregular_verbs.tsv", dir);
  for (auto& row : parse_tsv_rows(irregular, "irregular_verbs.tsv", 5)) {
    VerbForms forms{row[1], row[2], row[3], row[4]};
    const std::string& lemma = row[0];
    for (const std::string* f : std::initializer_list<const std::string*>{&lemma, &forms.past, &forms.third_singular, &forms.past_participle, &forms.gerund}) {
      auto [it, inserted] = lex.form_to_lemma_.emplace(*f, lemma);
      if (!inserted && it->second != lemma) {
        throw InvalidArgument("irregular_verbs.tsv: form '" + *f + "' listed for both '" + it->second + "' and '" +
                              lemma + "'");
      }
    }
    lex.participles_.insert(forms.past_participle);
    lex.irregulars_.emplace(lemma, std::move(forms));
  }
  const std::string regular = load_lexicon_file("regular_verbs.txt", dir);
  for (auto& row : parse_tsv_rows(regular, "regular_verbs.txt", 1)) lex.regular_.insert(row[0]);
  return lex;
}

const VerbLexicon& VerbLexicon::builtin() {
  static const VerbLexicon lex = load();
  return lex;
}

const VerbForms* VerbLexicon::irregular(std::string_view lemma) const {
  const auto it = irregulars_.find(lemma);
  return it == irregulars_.end() ? nullptr : &it->second;
}

std::optional<std::string> VerbLexicon::irregular_lemma(std::string_view form) const {
  const auto it = form_to_lemma_.find(form);
  if (it == form_to_lemma_.end()) return std::nullopt;
  return it->second;
}

bool VerbLexicon::is_known_lemma(std::string_view lemma) const {
  return regular_.contains(lemma) || irregulars_.contains(lemma) || lemma == "be";
}

bool VerbLexicon::is_irregular_past_participle(std::string_view form) const {
  return form == "been" || participles_.contains(form);
}

ContractionTable ContractionTable::load(const std::optional<std::filesystem::path>& dir) {
  ContractionTable table;
  const std::string content = load_lexicon_file("contractions.tsv", dir);
  for (auto& row : parse_tsv_rows(content, "contractions.tsv", 2)) {
    const std::string& aux = row[0];
    const std::string& neg = row[1];
    if (!neg.ends_with("n't")) throw InvalidArgument("contractions.tsv: '" + neg + "' does not end in n't");
    if (!table.forward_.emplace(aux, neg).second || !table.reverse_.emplace(neg, aux).second) {
      throw InvalidArgument("contractions.tsv: duplicate entry for '" + aux + "'");
    }
    table.hosts_.emplace(neg.substr(0, neg.size() - 3), aux);
  }
  return table;
}

const ContractionTable& ContractionTable::builtin() {
  static const ContractionTable table = load();
  return table;
}

std::optional<std::string> ContractionTable::contract(std::string_view aux) const {
  const auto it = forward_.find(to_lower(aux));
  if (it == forward_.end()) return std::nullopt;
  return match_case(it->second, aux);
}

std::optional<std::string> ContractionTable::expand(std::string_view contracted) const {
  const auto it = reverse_.find(to_lower(contracted));
  if (it == reverse_.end()) return std::nullopt;
  return match_case(it->second, contracted);
}

std::optional<std::string> ContractionTable::host_to_auxiliary(std::string_view host) const {
  const auto it = hosts_.find(to_lower(host));
  if (it == hosts_.end()) return std::nullopt;
  return match_case(it->second, host);
}

std::string lemmatize_verb(std::string_view form, const VerbLexicon& lex) {
  const std::string w = to_lower(form);
  if (w.empty()) return w;
  if (auto be = lemma_of_be(w)) return *be;
  if (auto irr = lex.irregular_lemma(w)) return *irr;
  if (lex.is_known_lemma(w)) return w;
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && ends_with(w, "ied")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && ends_with(w, "ing")) return repair_stem(w.substr(0, w.size() - 3), lex);
  if (w.size() > 3 && ends_with(w, "ed")) {
    const std::string stem = w.substr(0, w.size() - 2);
    if (lex.is_known_lemma(stem + "e") && !lex.is_known_lemma(stem)) return stem + "e";
    if (ends_with(stem, "e")) return ends_with(w, "eed") ? w.substr(0, w.size() - 1) : stem;
    return repair_stem(stem, lex);
  }
  if (w.size() > 3 && ends_with(w, "es")) {
    const std::string stem = w.substr(0, w.size() - 2);
    if (lex.is_known_lemma(stem)) return stem;
    if (lex.is_known_lemma(w.substr(0, w.size() - 1))) return w.substr(0, w.size() - 1);
    if (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") || ends_with(stem, "ch") ||
        ends_with(stem, "sh") || ends_with(stem, "o")) {
      return stem;
    }
    return w.substr(0, w.size() - 1);
  }
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss")) return w.substr(0, w.size() - 1);
  return w;
}

std::string inflect_verb(std::string_view lemma_in, const MorphTarget& target, const VerbLexicon& lex) {
  const std::string lemma = to_lower(lemma_in);
  if (lemma == "be") return inflect_be(target);
  const VerbForms* irr = lex.irregular(lemma);
  switch (target.verb_form) {
    case VerbForm::bare_infinitive: return lemma;
    case VerbForm::past_participle: return irr ? irr->past_participle : regular_past(lemma);
    case VerbForm::gerund: return irr ? irr->gerund : regular_gerund(lemma);
    case VerbForm::finite: break;
  }
  if (target.tense == Tense::past) return irr ? irr->past : regular_past(lemma);
  if (target.person == Person::third && target.number == Number::singular) {
    return irr ? irr->third_singular : regular_third_singular(lemma);
  }
  return lemma;
}

std::string conjugate_do(const MorphTarget& target) {
  if (target.tense == Tense::past) return "did";
  if (target.person == Person::third && target.number == Number::singular) return "does";
  return "do";
}

std::optional<std::string> contract_negation(std::string_view aux_surface, const ContractionTable& table) {
  return table.contract(aux_surface);
}

std::string expand_negative_contractions(std::string_view text, const ContractionTable& table) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto sp = text.find(' ', pos);
    if (sp == std::string_view::npos) sp = text.size();
    const std::string_view word = text.substr(pos, sp - pos);
    // Keep trailing punctuation attached to the expanded pair.
    std::size_t core_len = word.size();
    while (core_len > 0 && std::ispunct(static_cast<unsigned char>(word[core_len - 1])) && word[core_len - 1] != '\'') {
      --core_len;
    }
    const std::string_view core = word.substr(0, core_len);
    const std::string_view tail = word.substr(core_len);
    std::string replacement(word);
    if (to_lower(core) == "cannot") {
      replacement = match_case("can", core) + " not" + std::string(tail);
    } else if (auto full = table.expand(core)) {
      replacement = *full + " not" + std::string(tail);
    } else if (core.size() > 3 && to_lower(core).ends_with("n't")) {
      replacement = std::string(core.substr(0, core.size() - 3)) + " not" + std::string(tail);
    }
    if (!out.empty() || pos > 0) out += ' ';
    out += replacement;
    pos = sp + 1;
  }
  return out;
}

}  // namespace negforge::morph
