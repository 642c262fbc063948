#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rrgqa/error.hpp"
#include "rrgqa/lexicon.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

// ---------------------------------------------------------------------------
// Referents
// ---------------------------------------------------------------------------

enum class ReferentKind { entity, bundle, query, unspecified };

/// Question-word class of a query referent.
enum class Focus { none, who, what, where, how_many };

inline std::string to_string(Focus f) {
  switch (f) {
    case Focus::none: return "";
    case Focus::who: return "who";
    case Focus::what: return "what";
    case Focus::where: return "where";
    case Focus::how_many: return "how many";
  }
  return "";
}

struct Referent {
  ReferentKind kind = ReferentKind::unspecified;
  SenseId sense;                  // entity only
  std::string head;               // surface head used for rendering
  std::vector<Referent> members;  // bundle only
  Focus focus = Focus::none;      // query only
  AttrSet attrs;                  // definite, plural, female, enclosure, ...

  static Referent entity(SenseId sense, AttrSet attrs = {}, std::string head = {}) {
    Referent r;
    r.kind = ReferentKind::entity;
    if (head.empty()) {
      auto colon = sense.find(':');
      head = colon == std::string::npos ? sense : sense.substr(colon + 1);
    }
    r.sense = std::move(sense);
    r.head = std::move(head);
    r.attrs = std::move(attrs);
    return r;
  }

  /// Conjoined referents ("mary and jeff"). Kept whole, never exploded.
  static Referent bundle(std::vector<Referent> members) {
    if (members.size() < 2) throw SemanticsError("bundle", "a bundle needs at least two members");
    for (const auto& m : members)
      if (m.kind != ReferentKind::entity) throw SemanticsError("bundle", "bundle members must be entities");
    Referent r;
    r.kind = ReferentKind::bundle;
    r.members = std::move(members);
    r.attrs = {"plural"};
    return r;
  }

  static Referent query(Focus f, AttrSet attrs = {}) {
    Referent r;
    r.kind = ReferentKind::query;
    r.focus = f;
    r.attrs = std::move(attrs);
    return r;
  }

  static Referent unspecified() { return Referent{}; }

  bool is(ReferentKind k) const { return kind == k; }
  bool has(std::string_view a) const { return attrs.count(a) > 0; }

  bool contains_entity(std::string_view s) const {
    if (kind == ReferentKind::entity) return sense == s;
    if (kind == ReferentKind::bundle)
      for (const auto& m : members)
        if (m.sense == s) return true;
    return false;
  }

  std::string render() const {
    switch (kind) {
      case ReferentKind::entity: return (has("definite") ? "the " : "") + head;
      case ReferentKind::bundle: {
        std::vector<std::string> parts;
        for (const auto& m : members) parts.push_back(m.render());
        return text::join(parts, " and ");
      }
      case ReferentKind::query: {
        auto w = to_string(focus);
        if (!head.empty()) w += " " + head;
        return w;
      }
      case ReferentKind::unspecified: return "0";
    }
    return "?";
  }

  /// Identity used by context bookkeeping: sense ids (bundles sorted).
  std::string key() const {
    if (kind == ReferentKind::entity) return sense;
    if (kind == ReferentKind::bundle) {
      std::vector<std::string> ids;
      for (const auto& m : members) ids.push_back(m.sense);
      std::sort(ids.begin(), ids.end());
      return "{" + text::join(ids, "+") + "}";
    }
    return render();
  }

  bool operator==(const Referent&) const = default;
};

// ---------------------------------------------------------------------------
// Logical structures
// ---------------------------------------------------------------------------

struct LogicalStructure;
using LSPtr = std::shared_ptr<const LogicalStructure>;
using Arg = std::variant<Referent, LSPtr>;

/// A predicate occurrence: sense id plus the name it renders with.
struct Pred {
  SenseId sense;
  std::string name;

  Pred() = default;
  Pred(SenseId s, std::string n = {}) : sense(std::move(s)), name(std::move(n)) {
    if (name.empty()) {
      auto colon = sense.find(':');
      name = colon == std::string::npos ? sense : sense.substr(colon + 1);
    }
  }
  Pred(const char* s) : Pred(SenseId(s)) {}
  bool operator==(const Pred& o) const { return sense == o.sense; }
};

struct State {
  Pred pred;
  Arg first;
  std::optional<Arg> second;
};

/// do'(actor, [inner'(actor, undergoer)]) or do'(actor, 0) when inner is empty.
struct Activity {
  Referent actor;
  std::optional<Pred> inner;
  std::optional<Arg> undergoer;
};

enum class WrapOp { become, ingr, negation };

struct Wrapped {
  WrapOp op;
  LSPtr inner;
};

enum class Link { and_juncture, cause, conj };

struct Linked {
  LSPtr left;
  Link link;
  LSPtr right;
};

struct LogicalStructure {
  std::variant<State, Activity, Wrapped, Linked> node;

  template <class T> const T* as() const { return std::get_if<T>(&node); }
};

inline LSPtr make_ls(State s) { return std::make_shared<const LogicalStructure>(LogicalStructure{std::move(s)}); }
inline LSPtr make_ls(Activity a) { return std::make_shared<const LogicalStructure>(LogicalStructure{std::move(a)}); }
inline LSPtr make_ls(Wrapped w) { return std::make_shared<const LogicalStructure>(LogicalStructure{std::move(w)}); }
inline LSPtr make_ls(Linked l) { return std::make_shared<const LogicalStructure>(LogicalStructure{std::move(l)}); }

inline LSPtr wrap(WrapOp op, LSPtr inner) { return make_ls(Wrapped{op, std::move(inner)}); }
inline LSPtr link(LSPtr l, Link k, LSPtr r) { return make_ls(Linked{std::move(l), k, std::move(r)}); }

std::string render(const LogicalStructure& ls);

inline std::string render_arg(const Arg& a) {
  if (const auto* r = std::get_if<Referent>(&a)) return r->render();
  return "[" + render(*std::get<LSPtr>(a)) + "]";
}

/// Canonical text form, e.g. `do'(mary,[go'(mary)]) & INGR be-in'(the kitchen,mary)`.
inline std::string render(const LogicalStructure& ls) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, State>) {
          std::string out = n.pred.name + "'(" + render_arg(n.first);
          if (n.second) out += "," + render_arg(*n.second);
          return out + ")";
        } else if constexpr (std::is_same_v<T, Activity>) {
          std::string actor = n.actor.render();
          if (!n.inner) return "do'(" + actor + ",0)";
          std::string inner = n.inner->name + "'(" + actor;
          if (n.undergoer) inner += "," + render_arg(*n.undergoer);
          return "do'(" + actor + ",[" + inner + ")])";
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          const char* op = n.op == WrapOp::become ? "BECOME" : n.op == WrapOp::ingr ? "INGR" : "NOT";
          return std::string(op) + " " + render(*n.inner);
        } else {
          switch (n.link) {
            case Link::and_juncture: return render(*n.left) + " & " + render(*n.right);
            case Link::cause: return "[" + render(*n.left) + "] CAUSE [" + render(*n.right) + "]";
            case Link::conj: return render(*n.left) + " ∧ " + render(*n.right);
          }
          return "?";
        }
      },
      ls.node);
}

inline std::string render(const LSPtr& ls) { return ls ? render(*ls) : std::string("0"); }

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

enum class Tense { past, present, future };
enum class Voice { active, passive };
enum class Polarity { positive, negative };
enum class Force { statement, question, imperative };
enum class Number { singular, plural };
enum class Deixis { none, proximal, distal };

inline std::string to_string(Tense t) {
  return t == Tense::past ? "past" : t == Tense::present ? "present" : "future";
}

/// Clause operators. Defaults: present, active, positive, statement, 3rd
/// person singular.
struct OperatorSet {
  Tense tense = Tense::present;
  bool perfect = false;
  bool progressive = false;
  Voice voice = Voice::active;
  Polarity polarity = Polarity::positive;
  Force force = Force::statement;
  int person = 3;
  Number number = Number::singular;
  bool definite = false;
  Deixis deixis = Deixis::none;
  std::string modality;
  /// Set by "no longer": the clause also implies a prior positive state.
  bool no_longer = false;

  bool negative() const { return polarity == Polarity::negative; }
  bool question() const { return force == Force::question; }

  /// Tense followed by the non-default operators, e.g. `present,negative`.
  std::string render() const {
    std::vector<std::string> parts{to_string(tense)};
    if (perfect) parts.push_back("perfect");
    if (progressive) parts.push_back("progressive");
    if (voice == Voice::passive) parts.push_back("passive");
    if (polarity == Polarity::negative) parts.push_back("negative");
    if (force == Force::question) parts.push_back("question");
    if (force == Force::imperative) parts.push_back("imperative");
    if (person != 3) parts.push_back(std::to_string(person) + (number == Number::plural ? "pl" : "sg"));
    else if (number == Number::plural) parts.push_back("plural");
    if (!modality.empty()) parts.push_back("modal:" + modality);
    if (no_longer) parts.push_back("no-longer");
    return text::join(parts, ",");
  }

  bool operator==(const OperatorSet&) const = default;
};

/// Parses a comma/space list such as `future,negative,passive,1sg`.
inline OperatorSet parse_operators(std::string_view list) {
  OperatorSet ops;
  std::string norm(list);
  std::replace(norm.begin(), norm.end(), ',', ' ');
  for (const auto& t : text::split_ws(norm)) {
    if (t == "past") ops.tense = Tense::past;
    else if (t == "present") ops.tense = Tense::present;
    else if (t == "future") ops.tense = Tense::future;
    else if (t == "perfect") ops.perfect = true;
    else if (t == "progressive") ops.progressive = true;
    else if (t == "passive") ops.voice = Voice::passive;
    else if (t == "active") ops.voice = Voice::active;
    else if (t == "negative") ops.polarity = Polarity::negative;
    else if (t == "positive") ops.polarity = Polarity::positive;
    else if (t == "question") ops.force = Force::question;
    else if (t == "statement") ops.force = Force::statement;
    else if (t == "imperative") ops.force = Force::imperative;
    else if (t == "plural") ops.number = Number::plural;
    else if (t == "singular") ops.number = Number::singular;
    else if (t.size() == 3 && (t[0] >= '1' && t[0] <= '3') && (t.substr(1) == "sg" || t.substr(1) == "pl")) {
      ops.person = t[0] - '0';
      ops.number = t.substr(1) == "pl" ? Number::plural : Number::singular;
    } else if (t == "definite") ops.definite = true;
    else if (t == "proximal") ops.deixis = Deixis::proximal;
    else if (t == "distal") ops.deixis = Deixis::distal;
    else throw Error("operator", "unknown operator '" + t + "'");
  }
  return ops;
}

// ---------------------------------------------------------------------------
// Construction templates
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& positional_predicates() {
  static const std::vector<std::string> p = {"p:be-in", "p:be-on", "p:be-at"};
  return p;
}

inline bool is_positional(std::string_view sense) {
  for (const auto& p : positional_predicates())
    if (p == sense) return true;
  return sense == "p:be-LOC";
}

/// be-in / be-on / be-at by the dimensionality class of a location.
inline std::optional<Pred> position_predicate_for(const AttrSet& attrs) {
  if (attrs.count("enclosure")) return Pred("p:be-in");
  if (attrs.count("surface")) return Pred("p:be-on");
  if (attrs.count("locale")) return Pred("p:be-at");
  return std::nullopt;
}

/// State term. Positional states put the location in the first slot:
/// be-in'(the kitchen, mary).
inline LSPtr build_state(Pred pred, Arg first, std::optional<Arg> second = std::nullopt,
                         const Lexicon* lex = nullptr) {
  if (lex) {
    if (const auto* f = lex->frame_of(pred.sense)) {
      std::size_t arity = second ? 2 : 1;
      if (arity > f->roles.size())
        throw SemanticsError("arity", pred.sense + " takes " + std::to_string(f->roles.size()) + " argument(s)");
    }
  }
  return make_ls(State{std::move(pred), std::move(first), std::move(second)});
}

/// do'(x,[motion'(x)]) & INGR be-LOC'(destination, x) with be-in/on/at
/// chosen by the destination's dimensionality class.
inline LSPtr build_active_achievement(const Referent& actor, Pred motion, const Referent& destination,
                                      const Lexicon* lex = nullptr) {
  if (lex && lex->has_sense("p:go") && !lex->entails(motion.sense, "p:go"))
    throw SemanticsError("not-motion", motion.sense + " does not entail go");
  AttrSet dims = destination.attrs;
  if (lex && destination.kind == ReferentKind::entity)
    if (const auto* s = lex->find_sense(destination.sense)) dims.insert(s->attrs.begin(), s->attrs.end());
  auto position = position_predicate_for(dims);
  if (!position)
    throw SemanticsError("dimensionality", "destination '" + destination.render() + "' has no dimensionality class");
  auto activity = make_ls(Activity{actor, std::move(motion), std::nullopt});
  auto result = wrap(WrapOp::ingr, make_ls(State{*position, destination, actor}));
  return link(activity, Link::and_juncture, result);
}

enum class Direction { to, from };

/// Possession change built on have'. `direction == to`: the actor loses the
/// object and `other` (if given) gains it; `from`: the actor gains it and
/// `other` loses it. Causative rows wrap the leaves in [do'(actor,0)] CAUSE.
/// The actor's leaf always comes first.
inline LSPtr build_transfer(const Referent& actor, const Referent& object, const std::optional<Referent>& other,
                            bool causative, Direction direction) {
  if (actor.kind == ReferentKind::unspecified) throw SemanticsError("missing-role", "transfer needs an actor");
  if (object.kind == ReferentKind::unspecified) throw SemanticsError("missing-role", "transfer needs an undergoer");
  auto have = [&](const Referent& holder, bool positive) {
    auto leaf = make_ls(State{Pred("p:have"), holder, object});
    if (!positive) leaf = wrap(WrapOp::negation, leaf);
    return wrap(WrapOp::become, leaf);
  };
  const bool actor_gains = direction == Direction::from;
  LSPtr effect = have(actor, actor_gains);
  if (other && other->kind != ReferentKind::unspecified) effect = link(effect, Link::conj, have(*other, !actor_gains));
  if (!causative) return effect;
  return link(make_ls(Activity{actor, std::nullopt, std::nullopt}), Link::cause, effect);
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

/// Calls `fn(state, negated, changed)` for every State reachable without
/// crossing into a referent. `negated` counts NOT wrappers on the path,
/// `changed` is set under BECOME/INGR.
inline void visit_states(const LogicalStructure& ls,
                         const std::function<void(const State&, bool negated, bool changed)>& fn,
                         bool negated = false, bool changed = false) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, State>) {
          fn(n, negated, changed);
          if (const auto* l = std::get_if<LSPtr>(&n.first)) visit_states(**l, fn, negated, changed);
          if (n.second)
            if (const auto* l = std::get_if<LSPtr>(&*n.second)) visit_states(**l, fn, negated, changed);
        } else if constexpr (std::is_same_v<T, Activity>) {
          if (n.undergoer)
            if (const auto* l = std::get_if<LSPtr>(&*n.undergoer)) visit_states(**l, fn, negated, changed);
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          visit_states(*n.inner, fn, n.op == WrapOp::negation ? !negated : negated,
                       changed || n.op != WrapOp::negation);
        } else {
          visit_states(*n.left, fn, negated, changed);
          visit_states(*n.right, fn, negated, changed);
        }
      },
      ls.node);
}

/// Collects every referent in the term, left to right.
inline void visit_referents(const LogicalStructure& ls, const std::function<void(const Referent&)>& fn) {
  auto arg = [&](const Arg& a) {
    if (const auto* r = std::get_if<Referent>(&a)) fn(*r);
    else visit_referents(*std::get<LSPtr>(a), fn);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, State>) {
          arg(n.first);
          if (n.second) arg(*n.second);
        } else if constexpr (std::is_same_v<T, Activity>) {
          fn(n.actor);
          if (n.undergoer) arg(*n.undergoer);
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          visit_referents(*n.inner, fn);
        } else {
          visit_referents(*n.left, fn);
          visit_referents(*n.right, fn);
        }
      },
      ls.node);
}

/// Rebuilds the term with every referent passed through `fn`.
inline LSPtr map_referents(const LSPtr& ls, const std::function<Referent(const Referent&)>& fn) {
  auto arg = [&](const Arg& a) -> Arg {
    if (const auto* r = std::get_if<Referent>(&a)) return fn(*r);
    return map_referents(std::get<LSPtr>(a), fn);
  };
  return std::visit(
      [&](const auto& n) -> LSPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, State>) {
          return make_ls(State{n.pred, arg(n.first), n.second ? std::optional<Arg>(arg(*n.second)) : std::nullopt});
        } else if constexpr (std::is_same_v<T, Activity>) {
          return make_ls(Activity{fn(n.actor), n.inner,
                                  n.undergoer ? std::optional<Arg>(arg(*n.undergoer)) : std::nullopt});
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          return wrap(n.op, map_referents(n.inner, fn));
        } else {
          return link(map_referents(n.left, fn), n.link, map_referents(n.right, fn));
        }
      },
      ls->node);
}

// ---------------------------------------------------------------------------
// Unification
// ---------------------------------------------------------------------------

/// Outcome of a successful unify: what each query slot bound to, and the
/// sub-term of the item the query matched against.
struct MatchResult {
  std::map<Focus, Referent> bindings;
  LSPtr matched;
  /// For be-LOC queries, the positional predicate the location came from.
  std::optional<Pred> position;
};

/// `query` matches `item` if equal entities, the item is a bundle holding
/// the query entity, or the query is an open slot.
inline bool referent_matches(const Referent& query, const Referent& item) {
  switch (query.kind) {
    case ReferentKind::query:
    case ReferentKind::unspecified: return true;
    case ReferentKind::entity: return item.contains_entity(query.sense);
    case ReferentKind::bundle:
      if (item.kind != ReferentKind::bundle) return false;
      for (const auto& m : query.members)
        if (!item.contains_entity(m.sense)) return false;
      return true;
  }
  return false;
}

namespace detail {

inline bool pred_matches(const Pred& q, const Pred& i, const Lexicon* lex) {
  if (q.sense == i.sense) return true;
  if (q.sense == "p:be-LOC" && is_positional(i.sense)) return true;
  // Positional predicates differ only in how the location is realized.
  if (is_positional(q.sense) && is_positional(i.sense)) return true;
  return lex && lex->entails(i.sense, q.sense);
}

struct Unifier {
  const Lexicon* lex;
  MatchResult result;

  bool ref(const Referent& q, const Referent& i) {
    if (!referent_matches(q, i)) return false;
    if (q.kind == ReferentKind::query) {
      auto [it, fresh] = result.bindings.emplace(q.focus, i);
      if (!fresh && it->second.key() != i.key()) return false;
    }
    return true;
  }

  bool arg(const Arg& q, const Arg& i) {
    const auto* qr = std::get_if<Referent>(&q);
    const auto* ir = std::get_if<Referent>(&i);
    if (qr && ir) return ref(*qr, *ir);
    if (qr && qr->kind == ReferentKind::unspecified) return true;
    if (!qr && !ir) return term(*std::get<LSPtr>(q), *std::get<LSPtr>(i));
    return false;
  }

  static void flatten_conj(const LSPtr& ls, std::vector<LSPtr>& out) {
    if (const auto* l = ls->as<Linked>(); l && l->link == Link::conj) {
      flatten_conj(l->left, out);
      flatten_conj(l->right, out);
    } else {
      out.push_back(ls);
    }
  }

  bool conjuncts(const std::vector<LSPtr>& qs, std::size_t k, const std::vector<LSPtr>& is,
                 std::vector<bool>& used) {
    if (k == qs.size()) return true;
    for (std::size_t j = 0; j < is.size(); ++j) {
      if (used[j]) continue;
      auto saved = result.bindings;
      if (term(*qs[k], *is[j])) {
        used[j] = true;
        if (conjuncts(qs, k + 1, is, used)) return true;
        used[j] = false;
      }
      result.bindings = saved;
    }
    return false;
  }

  /// Every conjunct of `q` matches a distinct conjunct of `i`.
  bool covers(const LSPtr& q, const LSPtr& i) {
    std::vector<LSPtr> qs, is;
    flatten_conj(q, qs);
    flatten_conj(i, is);
    std::vector<bool> used(is.size(), false);
    auto saved = result.bindings;
    if (conjuncts(qs, 0, is, used)) return true;
    result.bindings = saved;
    return false;
  }

  bool side(const LSPtr& left, const LSPtr& right, const LogicalStructure& i) {
    return covers(link(left, Link::conj, right), std::make_shared<const LogicalStructure>(i));
  }

  bool term(const LogicalStructure& q, const LogicalStructure& i) {
    if (const auto* qs = q.as<State>()) {
      const auto* is = i.as<State>();
      if (!is || !pred_matches(qs->pred, is->pred, lex)) return false;
      if (!arg(qs->first, is->first)) return false;
      if (qs->second) {
        if (!is->second || !arg(*qs->second, *is->second)) return false;
      }
      if (qs->pred.sense == "p:be-LOC" && !result.position) result.position = is->pred;
      return true;
    }
    if (const auto* qa = q.as<Activity>()) {
      const auto* ia = i.as<Activity>();
      if (!ia || !ref(qa->actor, ia->actor)) return false;
      if (qa->inner && (!ia->inner || !pred_matches(*qa->inner, *ia->inner, lex))) return false;
      if (qa->undergoer && (!ia->undergoer || !arg(*qa->undergoer, *ia->undergoer))) return false;
      return true;
    }
    if (const auto* qw = q.as<Wrapped>()) {
      const auto* iw = i.as<Wrapped>();
      if (!iw) return false;
      // BECOME and INGR are both change-of-state wrappers; no answer depends on which.
      bool same = qw->op == iw->op || (qw->op != WrapOp::negation && iw->op != WrapOp::negation);
      return same && term(*qw->inner, *iw->inner);
    }
    const auto& ql = std::get<Linked>(q.node);
    const auto* il = i.as<Linked>();
    if (!il || il->link != ql.link) return false;
    if (ql.link == Link::conj) return side(ql.left, ql.right, i);
    if (ql.link == Link::cause) return covers(ql.left, il->left) && covers(ql.right, il->right);
    return term(*ql.left, *il->left) && term(*ql.right, *il->right);
  }
};

inline std::optional<MatchResult> unify_at(const LogicalStructure& query, const LSPtr& item, const Lexicon* lex) {
  Unifier u{lex, {}};
  if (u.term(query, *item)) {
    u.result.matched = item;
    return u.result;
  }
  // Drill into sub-terms, never through NOT: a negated state is not a match
  // for its positive counterpart.
  std::optional<MatchResult> found;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, State>) {
          if (const auto* l = std::get_if<LSPtr>(&n.first)) found = unify_at(query, *l, lex);
          if (!found && n.second)
            if (const auto* l = std::get_if<LSPtr>(&*n.second)) found = unify_at(query, *l, lex);
        } else if constexpr (std::is_same_v<T, Wrapped>) {
          if (n.op != WrapOp::negation) found = unify_at(query, n.inner, lex);
        } else if constexpr (std::is_same_v<T, Linked>) {
          found = unify_at(query, n.left, lex);
          if (!found) found = unify_at(query, n.right, lex);
        }
      },
      item->node);
  return found;
}

}  // namespace detail

/// Structural subsumption of `item` by `query`, searching sub-terms of the
/// item when the root does not match. Query referents bind to the item's
/// values; repeated query slots must bind consistently.
inline std::optional<MatchResult> unify(const LSPtr& query, const LSPtr& item, const Lexicon* lex = nullptr) {
  return detail::unify_at(*query, item, lex);
}

}  // namespace rrgqa
