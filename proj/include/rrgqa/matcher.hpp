#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rrgqa/error.hpp"
#include "rrgqa/lexicon.hpp"
#include "rrgqa/semantics.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

/// A matched clause: its logical structure, operators and any propositions
/// hoisted out of embedded clauses (innermost first).
struct Proposition {
  LSPtr ls;
  OperatorSet operators;
  std::vector<Proposition> embedded;
  std::string source;
  /// Selected predicate sense, empty for copular templates.
  SenseId predicate;
  /// Id of the predication pattern that produced the clause.
  std::string pattern;
  /// Qualia fallbacks taken during sense selection ("car has-a engine").
  std::vector<std::string> notes;

  std::string render() const { return "[" + operators.render() + "] " + rrgqa::render(ls); }
};

struct Tokens {
  std::vector<std::string> words;
  std::optional<Force> hint;
};

/// Lowercased words; terminal '?' or '.' becomes an illocutionary hint.
inline Tokens tokenize(std::string_view input) {
  std::string s(input);
  // Typographic apostrophes fold to ASCII so "won’t" and "won't" agree.
  for (std::size_t p; (p = s.find("\xE2\x80\x99")) != std::string::npos;) s.replace(p, 3, "'");
  Tokens out;
  auto trimmed = text::trim(s);
  if (!trimmed.empty()) {
    if (trimmed.back() == '?') out.hint = Force::question;
    else if (trimmed.back() == '.' || trimmed.back() == '!') out.hint = Force::statement;
  }
  static const std::string_view punct = ".,?!;:\"()";
  for (auto& w : text::split_ws(trimmed)) {
    std::string_view v = w;
    while (!v.empty() && punct.find(v.front()) != std::string_view::npos) v.remove_prefix(1);
    while (!v.empty() && punct.find(v.back()) != std::string_view::npos) v.remove_suffix(1);
    if (!v.empty()) out.words.push_back(text::lower(v));
  }
  return out;
}

struct Reading {
  SenseId sense;
  Category category = Category::referent;
  AttrSet attrs;
  bool operator==(const Reading&) const = default;
};

/// A labelled set produced by matching. Elements holding a clause are
/// frozen: only word and label conditions can select them.
struct Element {
  std::string word;
  std::size_t position = 0;
  std::size_t end = 0;
  std::vector<Reading> readings;
  AttrSet attrs;
  AttrSet labels;
  std::string role;
  std::vector<Element> constituents;
  std::optional<Referent> referent;
  std::shared_ptr<const Proposition> clause;
  std::vector<Proposition> embedded;

  bool frozen() const { return clause != nullptr; }

  bool has_attr(std::string_view a) const {
    if (attrs.count(a)) return true;
    for (const auto& r : readings)
      if (r.attrs.count(a)) return true;
    return false;
  }

  bool is_verbal() const {
    for (const auto& r : readings)
      if (r.attrs.count("verbal")) return true;
    return false;
  }

  bool is_referent() const {
    if (frozen()) return false;
    for (const auto& r : readings)
      if (r.category == Category::referent) return true;
    return false;
  }

  std::string signature() const {
    std::string s = std::to_string(position) + "-" + std::to_string(end) + "|" + word;
    if (clause) return s + "#" + clause->render() + "/" + text::join(std::vector<std::string>(labels.begin(), labels.end()), ",");
    for (const auto& r : readings) s += ";" + r.sense;
    s += "{" + text::attrs_to_string(attrs) + "}";
    if (referent) s += "=" + referent->key();
    s += "e" + std::to_string(embedded.size());
    return s;
  }
};

struct MatcherConfig {
  /// "took X there" keeps only the carry reading (no possession change).
  bool strict_take = false;
  /// Upper bound on predication states explored per utterance.
  std::size_t max_states = 50000;
};

namespace detail {

inline bool reading_condition(const Condition& c, const Reading& r, const Lexicon& lex) {
  if (c.key == "a") return r.attrs.count(c.value) > 0;
  if (c.key == "c") return to_string(r.category) == c.value;
  if (c.key == "s") return r.sense == c.value;
  if (c.key == "isa") return lex.has_sense(r.sense) && lex.holds_category(r.sense, c.value);
  return false;
}

/// Returns the element with readings narrowed to those that satisfied the
/// selector, or nothing.
inline std::optional<Element> select(const Selector& sel, const Element& el, const Lexicon& lex) {
  Element out = el;
  for (const auto& c : sel.conditions) {
    if (c.key == "w" || c.key == "l") {
      bool hit = c.key == "w" ? el.word == c.value : el.labels.count(c.value) > 0;
      if (hit == c.negated) return std::nullopt;
      continue;
    }
    if (el.frozen()) return std::nullopt;
    if (c.key == "a" && el.attrs.count(c.value)) {
      if (c.negated) return std::nullopt;
      continue;
    }
    std::vector<Reading> kept;
    for (const auto& r : out.readings)
      if (reading_condition(c, r, lex) != c.negated) kept.push_back(r);
    if (kept.empty()) return std::nullopt;
    out.readings = std::move(kept);
  }
  return out;
}

/// One way a pattern lined up against a run of elements: for each selector,
/// the element index it took (or none when an optional selector was skipped).
struct Alignment {
  std::size_t start = 0;
  std::size_t stop = 0;
  std::vector<std::optional<std::size_t>> slots;
  std::vector<Element> narrowed;
};

inline void align(const PhrasePattern& p, const std::vector<Element>& els, std::size_t si, std::size_t ei,
                  Alignment& cur, std::vector<Alignment>& out, const Lexicon& lex, bool first_only) {
  if (first_only && !out.empty()) return;
  if (si == p.selectors.size()) {
    Alignment a = cur;
    a.stop = ei;
    out.push_back(std::move(a));
    return;
  }
  const auto& sel = p.selectors[si];
  if (ei < els.size()) {
    if (auto n = select(sel, els[ei], lex)) {
      cur.slots.push_back(ei);
      cur.narrowed.push_back(std::move(*n));
      align(p, els, si + 1, ei + 1, cur, out, lex, first_only);
      cur.slots.pop_back();
      cur.narrowed.pop_back();
    }
  }
  if (sel.optional) {
    cur.slots.push_back(std::nullopt);
    cur.narrowed.emplace_back();
    align(p, els, si + 1, ei, cur, out, lex, first_only);
    cur.slots.pop_back();
    cur.narrowed.pop_back();
  }
}

inline std::vector<Alignment> alignments(const PhrasePattern& p, const std::vector<Element>& els, std::size_t pos,
                                         const Lexicon& lex, bool first_only) {
  std::vector<Alignment> out;
  Alignment cur;
  cur.start = pos;
  align(p, els, 0, pos, cur, out, lex, first_only);
  return out;
}

inline bool trigger_present(const PhrasePattern& p, const std::vector<Element>& els, const Lexicon& lex) {
  Selector s{{p.trigger}, false};
  for (const auto& e : els)
    if (select(s, e, lex)) return true;
  return false;
}

inline std::optional<std::string> label_of(const PhrasePattern& p, std::size_t selector) {
  for (const auto& [i, l] : p.labels)
    if (i == selector) return l;
  return std::nullopt;
}

enum class VerbKind { will, do_support, have, be, main };

inline VerbKind verb_kind(const Element& e) {
  for (const auto& r : e.readings) {
    if (!r.attrs.count("verbal")) continue;
    if (r.sense == "x:will") return VerbKind::will;
    if (r.sense == "x:do-support") return VerbKind::do_support;
    if (r.sense == "p:have") return VerbKind::have;
    if (r.sense == "p:be") return VerbKind::be;
    return VerbKind::main;
  }
  return VerbKind::main;
}

}  // namespace detail

/// Folds the verb group of a clause into operators. `clause` holds the
/// elements of one clause in surface order; auxiliaries consolidated into a
/// main verb are read from its `aux` constituents.
inline OperatorSet extract_operators(const std::vector<Element>& clause) {
  std::vector<const Element*> chain;
  OperatorSet ops;
  for (const auto& e : clause) {
    if (e.frozen()) continue;
    for (const auto& c : e.constituents)
      if (c.role == "aux" && c.is_verbal()) chain.push_back(&c);
    if (e.is_verbal()) chain.push_back(&e);
    if (e.has_attr("negative")) ops.polarity = Polarity::negative;
    if (e.has_attr("no-longer")) ops.no_longer = true;
  }
  std::sort(chain.begin(), chain.end(), [](const Element* a, const Element* b) { return a->position < b->position; });
  for (const auto* e : chain) {
    if (e->has_attr("negative")) ops.polarity = Polarity::negative;
    for (const auto& c : e->constituents)
      if (c.role == "aux" && c.has_attr("negative")) ops.polarity = Polarity::negative;
  }
  if (chain.empty()) return ops;

  const Element& first = *chain.front();
  if (detail::verb_kind(first) == detail::VerbKind::will) ops.tense = Tense::future;
  else ops.tense = first.has_attr("past") ? Tense::past : Tense::present;
  // Only unambiguous forms agree: "was" fits 1sg and 3sg, "put" is also past.
  const bool sg = first.has_attr("1sg") || first.has_attr("3sg");
  const bool both_tenses = first.has_attr("past") && first.has_attr("present");
  if (first.has_attr("plural") && !sg && !both_tenses) ops.number = Number::plural;
  if (first.has_attr("1sg") && !first.has_attr("3sg")) ops.person = 1;

  using detail::VerbKind;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const Element& x = *chain[i];
    const Element& y = *chain[i + 1];
    auto bad = [&] {
      return MatchError("inconsistent-aux", "'" + x.word + "' cannot be followed by '" + y.word + "'", y.position);
    };
    switch (detail::verb_kind(x)) {
      case VerbKind::will:
      case VerbKind::do_support:
        if (!y.has_attr("base")) throw bad();
        break;
      case VerbKind::have:
        if (!y.has_attr("past-participle")) throw bad();
        ops.perfect = true;
        break;
      case VerbKind::be:
        if (y.has_attr("present-participle")) ops.progressive = true;
        else if (y.has_attr("past-participle")) ops.voice = Voice::passive;
        else throw bad();
        break;
      case VerbKind::main: throw bad();
    }
  }
  return ops;
}

class Matcher {
public:
  explicit Matcher(const Lexicon& lex, MatcherConfig cfg = {}) : lex_(lex), cfg_(cfg) {
    for (const auto& p : lex_.patterns()) {
      if (p.kind == PatternKind::literal) literals_.push_back(&p);
      else if (p.kind == PatternKind::consolidation) consolidations_.push_back(&p);
      else predications_.push_back(&p);
    }
  }

  const Lexicon& lexicon() const { return lex_; }
  const MatcherConfig& config() const { return cfg_; }

  /// Literal phase plus lexicon lookup. Unknown words raise `unknown-word`.
  std::vector<Element> lookup(const Tokens& toks) const {
    std::vector<Element> out;
    const auto& w = toks.words;
    for (std::size_t i = 0; i < w.size();) {
      const PhrasePattern* best = nullptr;
      for (const auto* p : literals_) {
        if (p->trigger.value != w[i] || i + p->selectors.size() > w.size()) continue;
        bool ok = true;
        for (std::size_t k = 0; k < p->selectors.size() && ok; ++k)
          ok = p->selectors[k].conditions[0].value == w[i + k];
        if (ok && (!best || p->selectors.size() > best->selectors.size())) best = p;
      }
      if (best) {
        Element e;
        std::vector<std::string> parts(w.begin() + i, w.begin() + i + best->selectors.size());
        e.word = text::join(parts, " ");
        e.position = i;
        e.end = i + best->selectors.size();
        if (!best->templ.empty()) e.readings.push_back(reading_for(best->templ, {}));
        for (const auto& op : best->ops) e.attrs.insert(op);
        out.push_back(std::move(e));
        i += best->selectors.size();
        continue;
      }
      auto links = lex_.senses_of(w[i]);
      if (links.empty()) throw MatchError("unknown-word", "unknown word '" + w[i] + "' at position " + std::to_string(i), i);
      Element e;
      e.word = w[i];
      e.position = i;
      e.end = i + 1;
      for (const auto& l : links) e.readings.push_back(reading_for(l.sense, l.attrs));
      out.push_back(std::move(e));
      ++i;
    }
    return out;
  }

  /// Words in `input` the lexicon cannot place (after literal phrases).
  std::vector<std::string> unknown_words(std::string_view input) const {
    std::vector<std::string> missing;
    auto toks = tokenize(input);
    for (std::size_t i = 0; i < toks.words.size(); ++i) {
      Tokens rest;
      rest.words.assign(toks.words.begin() + i, toks.words.end());
      try {
        lookup(rest);
        break;
      } catch (const MatchError& e) {
        if (e.kind() != "unknown-word") throw;
        missing.push_back(rest.words[e.position()]);
        i += e.position();
      }
    }
    return missing;
  }

  /// Consolidation fixpoint: positions right to left, patterns in file
  /// order, first match wins, restart after every application.
  std::vector<Element> consolidate(std::vector<Element> els) const {
    std::vector<const PhrasePattern*> live;
    for (const auto* p : consolidations_)
      if (detail::trigger_present(*p, els, lex_)) live.push_back(p);
    bool applied = true;
    while (applied) {
      applied = false;
      for (std::size_t pos = els.size(); pos-- > 0 && !applied;) {
        for (const auto* p : live) {
          auto found = detail::alignments(*p, els, pos, lex_, true);
          if (found.empty() || found.front().stop - pos < 2) continue;
          els = splice(els, found.front(), consolidate_one(*p, found.front()));
          applied = true;
          break;
        }
      }
    }
    return els;
  }

  std::vector<Element> match_phrases(std::string_view input) const { return consolidate(lookup(tokenize(input))); }

  /// The referent an element stands for.
  Referent to_referent(const Element& e) const {
    if (e.referent) return *e.referent;
    const Reading* r = nullptr;
    for (const auto& x : e.readings)
      if (x.category == Category::referent) {
        r = &x;
        break;
      }
    if (!r && !e.readings.empty()) r = &e.readings.front();
    if (!r) return Referent::unspecified();
    AttrSet attrs;
    for (const auto& a : r->attrs)
      if (!text::starts_with(a, "lemma:")) attrs.insert(a);
    for (const auto* a : {"definite", "indefinite", "plural"})
      if (e.attrs.count(a)) attrs.insert(a);
    if (r->attrs.count("query")) {
      Focus f = r->attrs.count("query-who")        ? Focus::who
                : r->attrs.count("query-where")    ? Focus::where
                : r->attrs.count("query-how-many") ? Focus::how_many
                                                   : Focus::what;
      return Referent::query(f, attrs);
    }
    return Referent::entity(r->sense, attrs, lex_.lemma(r->sense));
  }

  /// Full pipeline: every complete reading of the utterance. Fails with
  /// `meaningless` when sense selection rejected every reading, otherwise
  /// `incomplete` when nothing covers the whole input.
  std::vector<Proposition> parse_utterance(std::string_view input) const {
    auto toks = tokenize(input);
    if (toks.words.empty()) throw MatchError("incomplete", "empty utterance");
    auto els = consolidate(lookup(toks));
    Search s{*this, toks, std::string(text::trim(input)), {}, {}, {}, {}, {}, 0};
    s.run(els);
    if (s.results.empty()) {
      if (!s.rejections.empty())
        throw MatchError("meaningless", "no word sense fits: " + text::join(s.rejections, "; "));
      if (s.aux_error) throw *s.aux_error;
      std::vector<std::string> left;
      for (const auto& e : els) left.push_back(e.word);
      throw MatchError("incomplete", "no reading covers '" + text::join(left, " ") + "'");
    }
    return s.results;
  }

  /// Operators of a bare verb group such as "won't have been being spoken".
  OperatorSet operators_of(std::string_view verb_group) const {
    auto els = consolidate(lookup(tokenize(verb_group)));
    return extract_operators(els);
  }

private:
  Reading reading_for(const SenseId& id, const AttrSet& form_attrs) const {
    const auto& s = lex_.sense(id);
    Reading r{id, s.category, s.attrs};
    r.attrs.insert(form_attrs.begin(), form_attrs.end());
    return r;
  }

  static std::vector<Element> splice(const std::vector<Element>& els, const detail::Alignment& a,
                                     std::vector<Element> replacement) {
    std::vector<Element> out(els.begin(), els.begin() + a.start);
    for (auto& r : replacement) out.push_back(std::move(r));
    out.insert(out.end(), els.begin() + a.stop, els.end());
    return out;
  }

  static void absorb(Element& into, const Element& other, const std::optional<std::string>& label) {
    into.position = std::min(into.position, other.position);
    into.end = std::max(into.end, other.end);
    if (label) {
      Element child = other;
      child.role = *label;
      child.constituents.clear();
      into.constituents.push_back(std::move(child));
    }
    for (const auto& c : other.constituents)
      if (!c.role.empty()) into.constituents.push_back(c);
    into.embedded.insert(into.embedded.end(), other.embedded.begin(), other.embedded.end());
  }

  std::vector<Element> consolidate_one(const PhrasePattern& p, const detail::Alignment& a) const {
    Element out = a.narrowed[p.retain];
    for (std::size_t i = 0; i < a.slots.size(); ++i)
      if (a.slots[i] && i != p.retain) absorb(out, a.narrowed[i], detail::label_of(p, i));
    for (const auto& op : p.ops) {
      if (op == "bundle") {
        std::vector<Referent> members;
        std::vector<std::string> words;
        for (std::size_t i = 0; i < a.slots.size(); ++i) {
          if (!a.slots[i]) continue;
          words.push_back(a.narrowed[i].word);
          if (a.narrowed[i].is_referent()) members.push_back(to_referent(a.narrowed[i]));
        }
        out.referent = Referent::bundle(std::move(members));
        out.word = text::join(words, " ");
        out.attrs.insert("plural");
      } else if (op == "chain") {
        std::vector<Element> group{out};
        try {
          if (extract_operators(group).voice == Voice::passive) out.attrs.insert("passive");
        } catch (const MatchError&) {
          // Left for the clause-level extraction to report.
        }
      } else {
        out.attrs.insert(op);
      }
    }
    return {std::move(out)};
  }

  struct Search {
    const Matcher& m;
    const Tokens& toks;
    std::string source;
    std::set<std::string> visited;
    std::set<std::string> seen;
    std::vector<Proposition> results;
    std::vector<std::string> rejections;
    std::optional<MatchError> aux_error;
    std::size_t states = 0;

    void run(const std::vector<Element>& els) {
      std::string sig;
      for (const auto& e : els) sig += e.signature() + "\n";
      if (!visited.insert(sig).second || ++states > m.cfg_.max_states) return;
      if (els.size() == 1 && els[0].frozen()) {
        auto prop = *els[0].clause;
        prop.embedded.insert(prop.embedded.begin(), els[0].embedded.begin(), els[0].embedded.end());
        if (seen.insert(render_all(prop)).second) results.push_back(std::move(prop));
        return;
      }
      for (std::size_t pos = 0; pos < els.size(); ++pos) {
        for (const auto* p : m.predications_) {
          for (const auto& a : detail::alignments(*p, els, pos, m.lex_, false)) {
            for (auto& el : m.predicate(*p, a, toks, source, *this)) run(splice(els, a, {std::move(el)}));
          }
        }
      }
    }

    static std::string render_all(const Proposition& p) {
      std::string s = p.render();
      for (const auto& e : p.embedded) s += " <" + render_all(e) + ">";
      return s;
    }
  };

  struct Roles {
    std::map<std::string, Referent> refs;
    std::map<std::string, const Element*> elems;
    const Element* pred = nullptr;
  };

  bool fits(const SelectionalFrame& f, const std::string& role, const Referent& r,
            std::vector<std::string>& notes) const {
    if (r.kind == ReferentKind::query || r.kind == ReferentKind::unspecified) return true;
    if (r.kind == ReferentKind::bundle) {
      for (const auto& mbr : r.members)
        if (!fits(f, role, mbr, notes)) return false;
      return true;
    }
    if (!lex_.has_sense(r.sense)) return false;
    if (lex_.selectional_fit(f, role, r.sense)) return true;
    for (const auto& [alt, kind] : lex_.qualia_expand(r.sense)) {
      if (lex_.selectional_fit(f, role, alt)) {
        notes.push_back(lex_.lemma(r.sense) + " " + to_string(kind) + " " + lex_.lemma(alt));
        return true;
      }
    }
    return false;
  }

  /// Sense selection against the frame: every labelled role must exist in
  /// the frame and fit it, and every required frame role must be filled.
  bool select_sense(const Reading& r, const Roles& roles, std::vector<std::string>& notes,
                    std::string& why) const {
    const auto* f = lex_.frame_of(r.sense);
    if (!f) return true;
    for (const auto& [role, ref] : roles.refs) {
      if (!is_role_name(role)) continue;
      if (!f->find(role)) {
        why = r.sense + " has no " + role;
        return false;
      }
      if (!fits(*f, role, ref, notes)) {
        why = ref.render() + " does not fit " + r.sense + " " + role;
        return false;
      }
    }
    for (const auto& fr : f->roles)
      if (fr.required && !roles.refs.count(fr.role)) {
        why = r.sense + " needs " + fr.role;
        return false;
      }
    return true;
  }

  LSPtr build(const PhrasePattern& p, const Roles& roles, const Reading& pred, std::vector<Element>& clause) const {
    auto ref = [&](const char* role) -> Referent {
      auto it = roles.refs.find(role);
      return it == roles.refs.end() ? Referent::unspecified() : it->second;
    };
    auto has = [&](const char* role) { return roles.refs.count(role) > 0; };
    const std::string& t = p.templ;
    if (t == "motion") return build_active_achievement(ref("actor"), Pred(pred.sense, lex_.lemma(pred.sense)), ref("destination"), &lex_);
    if (t == "position") {
      const Element* prep = roles.elems.at("preposition");
      AttrSet dims;
      for (const auto& r : prep->readings) dims.insert(r.attrs.begin(), r.attrs.end());
      auto pp = position_predicate_for(dims);
      if (!pp) throw SemanticsError("dimensionality", "'" + prep->word + "' names no position");
      return build_state(*pp, ref("location"), Arg(Referent::unspecified()));
    }
    if (t == "locate") {
      const Element* pos = nullptr;
      for (const auto& e : clause)
        if (e.frozen() && e.labels.count("position")) pos = &e;
      const auto* st = pos->clause->ls->as<State>();
      return build_state(st->pred, st->first, Arg(ref("theme")));
    }
    if (t == "where") return build_state(Pred("p:be-LOC"), Referent::query(Focus::where), Arg(ref("theme")));
    if (t == "holding") {
      Referent what = ref("undergoer");
      if (p.selectors.front().conditions.front().value == "query-how-many") {
        std::string head = what.head;
        what = Referent::query(Focus::how_many, what.attrs);
        what.head = head;
      }
      return build_state(Pred("p:have"), ref("actor"), Arg(what));
    }
    if (t == "activity") {
      std::optional<Arg> und;
      if (has("undergoer")) und = ref("undergoer");
      return make_ls(Activity{ref("actor"), Pred(pred.sense, lex_.lemma(pred.sense)), und});
    }
    if (t == "have-change") {
      const bool there = has("locative");
      LSPtr core;
      if (there && cfg_.strict_take && pred.attrs.count("carry-alt")) {
        core = make_ls(Activity{ref("actor"), Pred("p:carry", "carry"), Arg(ref("undergoer"))});
      } else if (pred.attrs.count("transfer")) {
        std::optional<Referent> other;
        if (has("recipient")) other = ref("recipient");
        core = build_transfer(ref("actor"), ref("undergoer"), other, true, Direction::to);
      } else if (pred.attrs.count("gain")) {
        std::optional<Referent> other;
        if (has("source")) other = ref("source");
        core = build_transfer(ref("actor"), ref("undergoer"), other, pred.attrs.count("causative") > 0, Direction::from);
      } else if (pred.attrs.count("lose")) {
        core = build_transfer(ref("actor"), ref("undergoer"), std::nullopt, pred.attrs.count("causative") > 0, Direction::to);
      } else {
        throw SemanticsError("template", pred.sense + " is not a possession change");
      }
      if (!there) return core;
      return build_state(Pred("p:be-LOC"), ref("locative"), Arg(core));
    }
    throw SemanticsError("template", "unknown template '" + t + "' in phrase " + p.id);
  }

  /// Applies a predication alignment. Returns one element per surviving
  /// predicate sense: a frozen clause, or for `embed` the retained referent
  /// carrying the clause as an embedded proposition.
  std::vector<Element> predicate(const PhrasePattern& p, const detail::Alignment& a, const Tokens& toks,
                                 const std::string& source, Search& s) const {
    Roles roles;
    std::vector<Element> clause;
    for (std::size_t i = 0; i < a.slots.size(); ++i) {
      if (!a.slots[i]) continue;
      clause.push_back(a.narrowed[i]);
    }
    for (std::size_t i = 0, k = 0; i < a.slots.size(); ++i) {
      if (!a.slots[i]) continue;
      const Element* e = &clause[k++];
      if (auto l = detail::label_of(p, i)) {
        roles.elems[*l] = e;
        if (*l == "pred") roles.pred = e;
        else if (*l != "preposition") roles.refs[*l] = to_referent(*e);
      }
      if (i == p.retain && !roles.pred) roles.pred = e;
    }
    if (p.has_op("embed")) roles.pred = roles.elems.count("pred") ? roles.elems.at("pred") : roles.pred;

    OperatorSet ops;
    try {
      ops = extract_operators(clause);
    } catch (const MatchError& e) {
      if (!s.aux_error) s.aux_error = e;
      return {};
    }
    if (p.has_op("question") || (toks.hint == Force::question && !p.has_op("embed"))) ops.force = Force::question;
    for (const auto& [role, r] : roles.refs)
      if (role == "actor" && r.kind == ReferentKind::bundle && !ops.question()) ops.number = Number::plural;

    std::vector<Proposition> embedded;
    for (const auto& e : clause) embedded.insert(embedded.end(), e.embedded.begin(), e.embedded.end());

    std::vector<Reading> candidates;
    if (!p.frame.empty() && roles.pred) candidates = roles.pred->readings;
    else candidates.push_back(Reading{});

    std::vector<Element> out;
    for (const auto& r : candidates) {
      std::vector<std::string> notes;
      std::string why;
      if (!r.sense.empty()) {
        const Reading* use = &r;
        Reading forced;
        if (p.frame != "*") {
          forced = Reading{p.frame, Category::predicate, r.attrs};
          use = &forced;
        }
        if (!select_sense(*use, roles, notes, why)) {
          s.rejections.push_back(why);
          continue;
        }
      }
      LSPtr ls;
      try {
        ls = build(p, roles, r, clause);
      } catch (const SemanticsError& e) {
        s.rejections.push_back(e.what());
        continue;
      }
      auto prop = std::make_shared<Proposition>();
      prop->ls = ls;
      prop->operators = ops;
      prop->source = source;
      prop->predicate = r.sense;
      prop->pattern = p.id;
      prop->notes = notes;

      if (p.has_op("embed")) {
        Element host = a.narrowed[p.retain];
        host.position = clause.front().position;
        host.end = clause.back().end;
        prop->embedded = embedded;
        host.embedded.clear();
        host.embedded.push_back(*prop);
        host.attrs.insert("qualified");
        out.push_back(std::move(host));
        continue;
      }
      prop->embedded = embedded;
      Element el;
      el.word = roles.pred ? roles.pred->word : a.narrowed[p.retain].word;
      el.position = clause.front().position;
      el.end = clause.back().end;
      el.readings = a.narrowed[p.retain].readings;
      el.labels.insert(p.templ);
      el.clause = prop;
      out.push_back(std::move(el));
    }
    return out;
  }

  const Lexicon& lex_;
  MatcherConfig cfg_;
  std::vector<const PhrasePattern*> literals_;
  std::vector<const PhrasePattern*> consolidations_;
  std::vector<const PhrasePattern*> predications_;
};

}  // namespace rrgqa
