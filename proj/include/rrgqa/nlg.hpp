#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrgqa/context.hpp"
#include "rrgqa/error.hpp"
#include "rrgqa/lexicon.hpp"
#include "rrgqa/semantics.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

enum class AnswerMode { keyword, natural };

/// Polar answer variants: "yes", "Yes, she is.", "Yes, she is in the kitchen."
enum class PolarStyle { bare, short_form, full };

struct RealizationOptions {
  AnswerMode mode = AnswerMode::keyword;
  PolarStyle polar = PolarStyle::short_form;
};

inline std::string numeral(std::size_t n) {
  static const char* words[] = {"zero", "one", "two", "three", "four", "five",
                                "six",  "seven", "eight", "nine", "ten"};
  return n <= 10 ? words[n] : std::to_string(n);
}

/// "in the kitchen", "on the mat", "at the beach"; the bare head in keyword
/// mode. The preposition follows the location's dimensionality, falling
/// back to the positional predicate the location was stored with.
inline std::string realize_position(const Referent& loc, AnswerMode mode = AnswerMode::natural,
                                    const std::optional<Pred>& stored = std::nullopt) {
  if (mode == AnswerMode::keyword) return loc.head;
  std::string prep;
  if (loc.has("enclosure")) prep = "in";
  else if (loc.has("surface")) prep = "on";
  else if (loc.has("locale")) prep = "at";
  else if (stored && stored->sense == "p:be-in") prep = "in";
  else if (stored && stored->sense == "p:be-on") prep = "on";
  else if (stored && stored->sense == "p:be-at") prep = "at";
  else throw GenerationError("dimensionality", "no preposition for '" + loc.head + "'");
  return prep + " the " + loc.head;
}

/// The five English forms of a verb.
struct VerbForms {
  std::string base, third, past, past_participle, present_participle;
};

inline VerbForms verb_forms(const Lexicon& lex, std::string_view sense) {
  auto get = [&](AttrSet want) {
    auto f = lex.form_with(sense, want);
    if (!f) throw GenerationError("missing-form", std::string(sense) + " lacks a form with {" + text::attrs_to_string(want) + "}");
    return *f;
  };
  return VerbForms{get({"base"}), get({"present", "3sg"}), get({"past"}), get({"past-participle"}),
                   get({"present-participle"})};
}

struct VerbGroup {
  /// The auxiliary fronted in questions, empty for statements.
  std::string fronted;
  std::string rest;

  std::string str() const {
    if (fronted.empty()) return rest;
    return rest.empty() ? fronted : fronted + " " + rest;
  }
};

/// Auxiliary chain in the order will, have, be (progressive), be (passive),
/// main verb. Do-support appears for negatives and questions without an
/// auxiliary; negation contracts onto the first word.
inline VerbGroup realize_verb_group(const OperatorSet& ops, const VerbForms& v) {
  enum class K { will, do_support, have, be_progressive, be_passive, main };
  enum class F { finite, base, past_participle, present_participle };
  std::vector<K> chain;
  if (ops.tense == Tense::future) chain.push_back(K::will);
  if (ops.perfect) chain.push_back(K::have);
  if (ops.progressive) chain.push_back(K::be_progressive);
  if (ops.voice == Voice::passive) chain.push_back(K::be_passive);
  chain.push_back(K::main);
  if (chain.size() == 1 && (ops.negative() || ops.question())) chain.insert(chain.begin(), K::do_support);

  const bool sg3 = ops.person == 3 && ops.number == Number::singular;
  const bool sg1 = ops.person == 1 && ops.number == Number::singular;
  const bool past = ops.tense == Tense::past;
  auto word = [&](K k, F f) -> std::string {
    switch (k) {
      case K::will: return "will";
      case K::do_support: return past ? "did" : sg3 ? "does" : "do";
      case K::have:
        if (f == F::finite) return past ? "had" : sg3 ? "has" : "have";
        return f == F::base ? "have" : f == F::past_participle ? "had" : "having";
      case K::be_progressive:
      case K::be_passive:
        if (f == F::finite) return past ? (sg3 || sg1 ? "was" : "were") : sg1 ? "am" : sg3 ? "is" : "are";
        return f == F::base ? "be" : f == F::past_participle ? "been" : "being";
      case K::main:
        if (f == F::finite) return past ? v.past : sg3 ? v.third : v.base;
        return f == F::base ? v.base : f == F::past_participle ? v.past_participle : v.present_participle;
    }
    return {};
  };

  std::vector<std::string> words;
  F next = F::finite;
  for (K k : chain) {
    words.push_back(word(k, next));
    switch (k) {
      case K::will:
      case K::do_support: next = F::base; break;
      case K::have:
      case K::be_passive: next = F::past_participle; break;
      case K::be_progressive: next = F::present_participle; break;
      case K::main: break;
    }
  }

  bool not_separate = false;
  if (ops.negative()) {
    static const std::map<std::string, std::string> contracted = {
        {"will", "won't"},   {"has", "hasn't"},   {"have", "haven't"}, {"had", "hadn't"},
        {"is", "isn't"},     {"are", "aren't"},   {"was", "wasn't"},   {"were", "weren't"},
        {"does", "doesn't"}, {"do", "don't"},     {"did", "didn't"}};
    auto it = contracted.find(words.front());
    if (it != contracted.end()) words.front() = it->second;
    else not_separate = true;  // "am not"
  }
  VerbGroup g;
  std::size_t from = 0;
  if (ops.question()) {
    g.fronted = words.front();
    from = 1;
  }
  std::vector<std::string> rest;
  if (not_separate) {
    if (ops.question()) rest.push_back("not");
    else {
      rest.push_back(words.front() + " not");
      from = 1;
    }
  }
  rest.insert(rest.end(), words.begin() + static_cast<std::ptrdiff_t>(from), words.end());
  g.rest = text::join(rest, " ");
  return g;
}

inline VerbGroup realize_verb_group(const OperatorSet& ops, const Lexicon& lex, std::string_view pred) {
  return realize_verb_group(ops, verb_forms(lex, pred));
}

/// French simple future: the infinitive (final -e of -re verbs dropped)
/// plus the personal ending.
inline std::string realize_verb_group_fr(const OperatorSet& ops, std::string_view infinitive) {
  if (ops.tense != Tense::future)
    throw GenerationError("unsupported-tense", "only the French simple future is supported");
  std::string stem(infinitive);
  if (stem.size() > 2 && stem.compare(stem.size() - 2, 2, "re") == 0) stem.pop_back();
  static const char* sg[] = {"ai", "as", "a"};
  static const char* pl[] = {"ons", "ez", "ont"};
  int p = std::clamp(ops.person, 1, 3) - 1;
  return stem + (ops.number == Number::plural ? pl[p] : sg[p]);
}

/// A noun phrase for clause realization.
struct NounPhrase {
  std::string singular;
  std::string plural;
  bool definite = false;
  Number number = Number::singular;
  Deixis deixis = Deixis::none;

  std::string str() const {
    const bool pl = number == Number::plural;
    const std::string& head = pl ? plural : singular;
    if (deixis == Deixis::proximal) return (pl ? "these " : "this ") + head;
    if (deixis == Deixis::distal) return (pl ? "those " : "that ") + head;
    if (definite) return "the " + head;
    if (pl) return head;
    bool vowel = !head.empty() && std::string_view("aeiou").find(head[0]) != std::string_view::npos;
    return (vowel ? "an " : "a ") + head;
  }
};

/// Full two-argument clause. Passive voice promotes the undergoer and
/// demotes the actor to a by-phrase; questions front the first auxiliary.
inline std::string realize_clause(const NounPhrase& actor, const NounPhrase& undergoer, const VerbForms& verb,
                                  OperatorSet ops) {
  const bool passive = ops.voice == Voice::passive;
  const NounPhrase& subject = passive ? undergoer : actor;
  std::string object = passive ? "by " + actor.str() : undergoer.str();
  ops.person = 3;
  ops.number = subject.number;
  auto vg = realize_verb_group(ops, verb);
  if (ops.question()) {
    std::string s = text::capitalize(vg.fronted) + " " + subject.str();
    if (!vg.rest.empty()) s += " " + vg.rest;
    return s + " " + object + "?";
  }
  return text::capitalize(subject.str()) + " " + vg.str() + " " + object;
}

namespace detail {

inline std::string natural_referent(const Referent& r) {
  if (r.kind == ReferentKind::bundle) {
    std::vector<std::string> parts;
    for (const auto& m : r.members) parts.push_back(natural_referent(m));
    return text::join_and(parts);
  }
  if (r.has("proper")) return text::capitalize(r.head);
  return "the " + r.head;
}

inline std::string pronoun_for(const Referent& r) {
  if (r.kind == ReferentKind::bundle || r.has("plural")) return "they";
  if (r.has("female")) return "she";
  if (r.has("male")) return "he";
  return "it";
}

inline std::string be_form(Tense t, bool plural, bool negative) {
  std::string w = t == Tense::past ? (plural ? "were" : "was") : (plural ? "are" : "is");
  return negative ? w + "n't" : w;
}

}  // namespace detail

/// Turns an answer into text. Keyword mode gives bare heads ("office",
/// "milk,football", "two", "mary"); natural mode gives phrases and
/// polar sentences ("in the office", "Yes, she is.").
inline std::string realize_answer(const AnswerContent& a, const RealizationOptions& opt = {}) {
  const bool kw = opt.mode == AnswerMode::keyword;
  auto value = [&](const Binding& b) {
    if (b.position || a.focus == Focus::where) return realize_position(b.value, opt.mode, b.position);
    if (!kw) return detail::natural_referent(b.value);
    if (b.value.kind != ReferentKind::bundle) return b.value.head;
    std::vector<std::string> heads;
    for (const auto& m : b.value.members) heads.push_back(m.head);
    return text::join(heads, ",");
  };
  switch (a.kind) {
    case AnswerKind::count:
      if (kw) return a.count == 0 ? "none" : numeral(a.count);
      return numeral(a.count);
    case AnswerKind::list:
    case AnswerKind::content: {
      std::vector<std::string> parts;
      for (const auto& b : a.bindings) parts.push_back(value(b));
      if (parts.empty()) return a.focus == Focus::where && !kw ? "nowhere I know of" : "nothing";
      return kw ? text::join(parts, ",") : text::join_and(parts);
    }
    case AnswerKind::polar: break;
  }
  if (kw || opt.polar == PolarStyle::bare) return a.yes ? "yes" : "no";

  const bool positional = !a.bindings.empty() ? a.bindings.front().position.has_value()
                                               : (a.contrast && a.contrast->position.has_value());
  // Echo the tense of the supporting item when it differs from the question.
  Tense tense = a.echo.tense;
  if (!a.bindings.empty() && a.bindings.front().item_operators.tense == Tense::past) tense = Tense::past;
  const Referent subject = a.subject.value_or(Referent::unspecified());
  const bool plural = subject.kind == ReferentKind::bundle || subject.has("plural");
  std::string pron = detail::pronoun_for(subject);
  std::string aux = positional ? detail::be_form(tense, plural, false)
                   : a.echo.tense == Tense::past ? "did"
                   : plural ? "do"
                            : "does";

  if (a.yes) {
    std::string s = "Yes, " + pron + " " + aux;
    if (opt.polar == PolarStyle::full && positional)
      s += " " + realize_position(a.bindings.front().value, AnswerMode::natural, a.bindings.front().position);
    return s + ".";
  }
  if (a.contrast) {
    // The contrast answers the question as asked: "No, but Sandra is."
    return "No, but " + detail::natural_referent(a.contrast->value) + " " +
           (positional ? detail::be_form(a.echo.tense, false, false) : std::string("did")) + ".";
  }
  if (opt.polar == PolarStyle::full && positional && !a.bindings.empty())
    return "No, " + pron + " " + aux + " " +
           realize_position(a.bindings.front().value, AnswerMode::natural, a.bindings.front().position) + ".";
  return "No, " + pron + " " + aux + "n't.";
}

}  // namespace rrgqa
