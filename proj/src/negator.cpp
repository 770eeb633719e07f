#include "negforge/negator.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

#include "negforge/error.hpp"

namespace negforge {

namespace {

using morph::match_case;
using morph::to_lower;

bool is_aux_relation(std::string_view deprel) {
  return deprel == "aux" || deprel == "cop" || deprel == "auxpass" || deprel == "aux:pass";
}

bool is_auxiliary(const Token& t) { return t.coarse_pos == Pos::AUX || is_aux_relation(t.deprel); }

std::string lemma_of(const Token& t) { return to_lower(t.lemma.empty() ? t.surface : t.lemma); }

bool is_do_form(const Token& t) {
  const std::string s = to_lower(t.surface);
  return lemma_of(t) == "do" || s == "do" || s == "does" || s == "did";
}

bool is_modal(const Token& t) { return t.fine_tag == "MD"; }

// Finite target carried by a do-auxiliary, falling back to its surface when the
// tag is missing.
MorphTarget do_target(const Token& t) {
  if (auto target = target_from_tag(t.fine_tag); target && target->verb_form == VerbForm::finite) return *target;
  const std::string s = to_lower(t.surface);
  if (s == "did") return MorphTarget::past();
  if (s == "does") return MorphTarget::present(Person::third, Number::singular);
  return MorphTarget::present(Person::first, Number::singular);
}

void capitalize_first(std::string& s) {
  if (!s.empty()) s.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(s.front())));
}

bool starts_upper(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s.front())); }

// Token list under edit. Surviving tokens keep their original index until
// finish() renumbers; inserted tokens carry index 0 and point at original
// indices through `head`.
class Editor {
 public:
  explicit Editor(const ParsedSentence& s) : tokens_(s.tokens().begin(), s.tokens().end()) {
    for (const Token& t : tokens_) original_heads_[t.index] = t.head;
  }

  Token& by_index(std::size_t index) { return tokens_[position(index)]; }

  void remove(std::size_t index) {
    const std::size_t p = position(index);
    const bool was_first = p == 0;
    const bool was_capitalized = starts_upper(tokens_[p].surface);
    if (p > 0) tokens_[p - 1].space_after = tokens_[p].space_after;
    tokens_.erase(tokens_.begin() + static_cast<std::ptrdiff_t>(p));
    if (was_first && was_capitalized && !tokens_.empty()) capitalize_first(tokens_.front().surface);
  }

  // Inserts `t` before the token with original `index`.
  void insert_before(std::size_t index, Token t) {
    t.index = 0;
    tokens_.insert(tokens_.begin() + static_cast<std::ptrdiff_t>(position(index)), std::move(t));
  }

  void insert_after_position(std::size_t pos, Token t) {
    t.index = 0;
    tokens_.insert(tokens_.begin() + static_cast<std::ptrdiff_t>(pos + 1), std::move(t));
  }

  std::size_t position(std::size_t index) const {
    for (std::size_t p = 0; p < tokens_.size(); ++p) {
      if (tokens_[p].index == index) return p;
    }
    throw UnsupportedStructure("token " + std::to_string(index) + " vanished during rewriting");
  }

  std::vector<Token> finish() {
    std::map<std::size_t, std::size_t> renumber;
    for (std::size_t p = 0; p < tokens_.size(); ++p) {
      if (tokens_[p].index != 0) renumber[tokens_[p].index] = p + 1;
    }
    auto resolve = [&](std::size_t old) {
      // Deleted heads hand their dependents to their own head.
      while (old != 0 && !renumber.contains(old)) old = original_heads_.at(old);
      return old == 0 ? std::size_t{0} : renumber.at(old);
    };
    std::vector<Token> out = tokens_;
    for (std::size_t p = 0; p < out.size(); ++p) {
      out[p].head = resolve(out[p].head);
      out[p].index = p + 1;
    }
    return out;
  }

 private:
  std::vector<Token> tokens_;
  std::map<std::size_t, std::size_t> original_heads_;
};

Token make_token(std::string surface, std::string lemma, Pos pos, std::string tag, std::size_t head, std::string deprel,
                 bool space_after) {
  Token t;
  t.surface = std::move(surface);
  t.lemma = std::move(lemma);
  t.coarse_pos = pos;
  t.fine_tag = std::move(tag);
  t.head = head;
  t.deprel = std::move(deprel);
  t.space_after = space_after;
  return t;
}

}  // namespace

bool Negator::is_negated(const ParsedSentence& sentence) const {
  return std::any_of(sentence.tokens().begin(), sentence.tokens().end(), is_negation_cue);
}

NegationOutcome Negator::negate(const ParsedSentence& sentence) const {
  std::vector<const Token*> cues;
  for (const Token& t : sentence.tokens()) {
    if (is_negation_cue(t)) cues.push_back(&t);
  }
  if (cues.size() > 1) throw UnsupportedStructure("sentence carries " + std::to_string(cues.size()) + " negation cues");
  NegationOutcome out = cues.empty() ? add_negation(sentence) : remove_negation(sentence, *cues.front());
  out.text = detokenize(out.tokens);
  return out;
}

NegationOutcome Negator::remove_negation(const ParsedSentence& sentence, const Token& cue) const {
  // The auxiliary hosting the cue: its head when that is an auxiliary, else
  // the nearest auxiliary sibling to its left (UD attaches cues to the verb).
  const Token* host = nullptr;
  const Token* governor = nullptr;
  const Token& head = cue.head == 0 ? cue : sentence.at(cue.head);
  if (cue.head != 0 && is_auxiliary(head)) {
    host = &head;
    governor = head.head == 0 ? nullptr : &sentence.at(head.head);
  } else if (cue.head != 0) {
    governor = &head;
    for (const Token& sib : children_of(sentence, head.index)) {
      if (sib.index < cue.index && is_aux_relation(sib.deprel)) host = &sentence.at(sib.index);
    }
  }

  NegationOutcome out;
  Editor ed(sentence);
  const bool do_support = host != nullptr && is_do_form(*host) && governor != nullptr &&
                          governor->coarse_pos == Pos::VERB && governor->index != host->index;
  if (do_support) {
    for (const Token& sib : children_of(sentence, governor->index)) {
      if (is_aux_relation(sib.deprel) && is_modal(sib)) {
        throw UnsupportedStructure("clause combines a modal with do-support");
      }
    }
    const MorphTarget target = do_target(*host);
    Token& verb = ed.by_index(governor->index);
    const std::string lemma = verb.lemma.empty() ? morph::lemmatize_verb(verb.surface, *verbs_) : lemma_of(verb);
    verb.surface = match_case(morph::inflect_verb(lemma, target, *verbs_), verb.surface);
    if (!host->fine_tag.empty()) verb.fine_tag = host->fine_tag;
    out.branch = Branch::remove_do_support;
    // Remove the later token first so spacing flows back onto the earlier one.
    const std::size_t first = std::min(host->index, cue.index);
    const std::size_t second = std::max(host->index, cue.index);
    const std::string first_surface = sentence.at(first).surface;
    const std::string second_surface = sentence.at(second).surface;
    ed.remove(second);
    ed.remove(first);
    out.removed_cues = {first_surface, second_surface};
  } else {
    out.branch = Branch::remove_cue;
    if (to_lower(cue.surface) == "n't" && cue.index > 1) {
      const Token& before = sentence.at(cue.index - 1);
      if (!before.space_after) {
        if (auto full = contractions_->host_to_auxiliary(before.surface)) ed.by_index(before.index).surface = *full;
      }
    }
    ed.remove(cue.index);
    out.removed_cues = {cue.surface};
  }
  out.tokens = ed.finish();
  return out;
}

NegationOutcome Negator::add_negation(const ParsedSentence& sentence) const {
  const Token& root = root_of(sentence);
  std::vector<Token> aux_children;
  for (const Token& c : children_of(sentence, root.index)) {
    if (is_aux_relation(c.deprel)) aux_children.push_back(c);
  }
  const bool has_modal = is_modal(root) || std::any_of(aux_children.begin(), aux_children.end(), is_modal);
  const bool has_do = (root.coarse_pos == Pos::AUX && is_do_form(root)) ||
                      std::any_of(aux_children.begin(), aux_children.end(), is_do_form);
  if (has_modal && has_do) throw UnsupportedStructure("clause combines a modal with do-support");

  NegationOutcome out;
  Editor ed(sentence);

  // Places a negation right after `target`, contracting onto it when allowed.
  auto negate_after = [&](const Token& target) {
    Token& host = ed.by_index(target.index);
    const bool old_space = host.space_after;
    std::optional<std::string> contracted;
    if (options_.prefer_contractions && host.space_after) contracted = morph::contract_negation(host.surface, *contractions_);
    if (contracted) {
      host.surface = contracted->substr(0, contracted->size() - 3);
      host.space_after = false;
      ed.insert_after_position(ed.position(target.index),
                               make_token("n't", "not", Pos::PART, "RB", target.index, "neg", old_space));
      out.added_tokens = {"n't"};
      out.contracted = true;
    } else {
      host.space_after = true;
      ed.insert_after_position(ed.position(target.index),
                               make_token("not", "not", Pos::PART, "RB", target.index, "neg", old_space));
      out.added_tokens = {"not"};
    }
  };

  if (!aux_children.empty()) {
    out.branch = Branch::negate_first_aux;
    negate_after(aux_children.front());
  } else if (root.coarse_pos == Pos::AUX) {
    out.branch = Branch::negate_root_aux;
    negate_after(root);
  } else if (root.coarse_pos == Pos::VERB) {
    const std::string lemma = root.lemma.empty() ? morph::lemmatize_verb(root.surface, *verbs_) : lemma_of(root);
    std::optional<MorphTarget> target = target_from_tag(root.fine_tag);
    if (root.fine_tag.empty()) {
      if (to_lower(root.surface) == morph::inflect_verb(lemma, MorphTarget::past(), *verbs_)) {
        target = MorphTarget::past();
      } else if (to_lower(root.surface) ==
                 morph::inflect_verb(lemma, MorphTarget::present(Person::third, Number::singular), *verbs_)) {
        target = MorphTarget::present(Person::third, Number::singular);
      } else {
        target = MorphTarget::present(Person::first, Number::singular);
      }
    }
    if (target && target->verb_form == VerbForm::bare_infinitive && root.fine_tag == "VB") {
      target = MorphTarget::present(Person::first, Number::singular);
    }
    if (!target || target->verb_form != VerbForm::finite) {
      throw UnsupportedStructure("root verb '" + root.surface + "' is not finite and has no auxiliary");
    }
    out.branch = Branch::add_do_support;
    const std::string do_form = morph::conjugate_do(*target);
    const std::string do_tag = target->tense == Tense::past ? "VBD"
                               : (target->person == Person::third && target->number == Number::singular) ? "VBZ"
                                                                                                         : "VBP";
    Token& verb = ed.by_index(root.index);
    const bool sentence_initial = ed.position(root.index) == 0;
    std::string do_surface = do_form;
    if (sentence_initial && starts_upper(verb.surface)) {
      capitalize_first(do_surface);
      if (verb.surface != "I") verb.surface.front() = static_cast<char>(std::tolower(static_cast<unsigned char>(verb.surface.front())));
    }
    verb.surface = match_case(lemma, verb.surface);
    verb.fine_tag = "VB";
    std::optional<std::string> contracted;
    if (options_.prefer_contractions) contracted = morph::contract_negation(do_surface, *contractions_);
    Token do_token = make_token(contracted ? contracted->substr(0, contracted->size() - 3) : do_surface, "do", Pos::AUX,
                                do_tag, root.index, "aux", !contracted);
    ed.insert_before(root.index, std::move(do_token));
    // The cue points at the inserted do-token; finish() only resolves original
    // indices, so attach it to the root and fix it up below.
    ed.insert_before(root.index, make_token(contracted ? "n't" : "not", "not", Pos::PART, "RB", root.index, "neg", true));
    out.added_tokens = {do_surface, contracted ? "n't" : "not"};
    out.contracted = contracted.has_value();
    out.tokens = ed.finish();
    const std::size_t cue_pos = [&] {
      for (std::size_t p = 0; p < out.tokens.size(); ++p) {
        if (out.tokens[p].deprel == "neg") return p;
      }
      return std::size_t{0};
    }();
    out.tokens[cue_pos].head = out.tokens[cue_pos - 1].index;
    return out;
  } else {
    throw UnsupportedStructure("no verb or auxiliary to negate (root '" + root.surface + "')");
  }
  out.tokens = ed.finish();
  return out;
}

bool is_negated(const ParsedSentence& sentence) { return Negator().is_negated(sentence); }

NegationOutcome negate(const ParsedSentence& sentence, const NegatorOptions& options) {
  return Negator(options).negate(sentence);
}

}  // namespace negforge
