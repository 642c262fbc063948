#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rrgqa/error.hpp"
#include "rrgqa/lexicon.hpp"
#include "rrgqa/matcher.hpp"
#include "rrgqa/semantics.hpp"

namespace rrgqa {

/// One stored proposition. Never mutated once appended.
struct ContextItem {
  std::size_t index = 0;
  LSPtr ls;
  OperatorSet operators;
  std::string source;
  /// Originating line in a story file, 0 when not from a file.
  std::size_t line = 0;

  std::string render() const {
    return "#" + std::to_string(index) + " [" + operators.render() + "] " + rrgqa::render(ls) + " :: " + source;
  }
};

struct TrackerConfig {
  /// Past-tense "where" lists include the current position.
  bool include_current_position = true;
  /// Content answers over transfers return only the most recent match.
  bool babi_last = false;
  /// "received" requires a giver: bare acquisitions do not count.
  bool strict_receive = false;
};

struct PositionFact {
  Referent location;
  Pred pred;
  bool negative = false;
  std::size_t item = 0;
  OperatorSet operators;
};

struct Holding {
  Referent object;
  bool held = false;
  std::vector<std::size_t> events;
};

struct Ledger {
  std::vector<Holding> objects;
  std::vector<std::string> diagnostics;

  std::vector<Referent> held() const {
    std::vector<Referent> out;
    for (const auto& h : objects)
      if (h.held) out.push_back(h.object);
    return out;
  }
};

enum class AnswerKind { polar, content, count, list };

struct Binding {
  Referent value;
  /// For location answers: the positional predicate (in/on/at).
  std::optional<Pred> position;
  std::size_t item = 0;
  OperatorSet item_operators;
};

struct AnswerContent {
  AnswerKind kind = AnswerKind::content;
  bool yes = false;
  /// Selected answer, in context order.
  std::vector<Binding> bindings;
  /// Every match before any last-only selection.
  std::vector<Binding> matches;
  Focus focus = Focus::none;
  OperatorSet echo;
  std::optional<Referent> subject;
  std::optional<Binding> contrast;
  std::size_t count = 0;
  /// The question asked who received something.
  bool receive = false;
};

/// Append-only discourse store for one story.
class Tracker {
public:
  explicit Tracker(const Lexicon& lex, TrackerConfig cfg = {}) : lex_(&lex), cfg_(cfg) {}

  const std::vector<ContextItem>& items() const { return items_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  const TrackerConfig& config() const { return cfg_; }

  /// Appends a statement, its embedded propositions first. Pronouns are
  /// resolved against earlier mentions before the item is stored.
  void ingest(const Proposition& prop, std::size_t line = 0) {
    if (prop.operators.question()) throw ContextError("not-a-statement", "questions are answered, not stored");
    for (const auto& e : prop.embedded) ingest(e, line);
    LSPtr ls = resolve_all(prop.ls);
    visit_referents(*ls, [&](const Referent& r) {
      if ((r.kind == ReferentKind::entity && !r.has("deictic-locative")) || r.kind == ReferentKind::bundle)
        mentions_.push_back(r);
    });
    if (prop.operators.no_longer) {
      OperatorSet before = prop.operators;
      before.tense = Tense::past;
      before.polarity = Polarity::positive;
      before.no_longer = false;
      append(ls, before, prop.source, line);
    }
    append(ls, prop.operators, prop.source, line);
  }

  /// The most recent agreeing antecedent: bundles for plural pronouns,
  /// gender match for he/she, non-person non-location things for "it".
  Referent resolve_pronoun(const Referent& pronoun) const {
    for (auto it = mentions_.rbegin(); it != mentions_.rend(); ++it) {
      const Referent& m = *it;
      if (pronoun.has("plural")) {
        if (m.kind == ReferentKind::bundle) return m;
        continue;
      }
      if (m.kind != ReferentKind::entity) continue;
      if (pronoun.has("female") && m.has("female") && m.has("person")) return m;
      if (pronoun.has("male") && m.has("male") && m.has("person")) return m;
      if (pronoun.has("neuter") && !m.has("person") && !m.has("location")) return m;
    }
    throw ContextError("unresolved-pronoun", "no antecedent for '" + pronoun.head + "'");
  }

  /// Positional states whose located referent matches `who`, in context order.
  std::vector<PositionFact> positions_of(const Referent& who) const {
    std::vector<PositionFact> out;
    for (const auto& item : items_) {
      visit_states(*item.ls, [&](const State& st, bool negated, bool) {
        if (!is_positional(st.pred.sense) || st.pred.sense == "p:be-LOC" || !st.second) return;
        const auto* loc = std::get_if<Referent>(&st.first);
        const auto* theme = std::get_if<Referent>(&*st.second);
        if (!loc || !theme || !referent_matches(who, *theme)) return;
        out.push_back(PositionFact{*loc, st.pred, negated != item.operators.negative(), item.index, item.operators});
      });
    }
    return out;
  }

  /// The last positive position, unless a later negative names that place.
  std::optional<PositionFact> current_position(const Referent& who) const {
    std::optional<PositionFact> cur;
    for (const auto& f : positions_of(who)) {
      if (!f.negative) cur = f;
      else if (cur && cur->location.key() == f.location.key()) cur.reset();
    }
    return cur;
  }

  /// Replays have' changes for `holder`. Removing an object that is not
  /// held is reported as a story inconsistency, not an error.
  Ledger holdings_of(const Referent& holder) const {
    Ledger ledger;
    for (const auto& item : items_) {
      if (item.operators.negative()) continue;
      visit_states(*item.ls, [&](const State& st, bool negated, bool) {
        if (st.pred.sense != "p:have" || !st.second) return;
        const auto* who = std::get_if<Referent>(&st.first);
        const auto* what = std::get_if<Referent>(&*st.second);
        if (!who || !what || what->kind != ReferentKind::entity || !referent_matches(holder, *who)) return;
        auto it = std::find_if(ledger.objects.begin(), ledger.objects.end(),
                               [&](const Holding& h) { return h.object.key() == what->key(); });
        if (negated) {
          if (it == ledger.objects.end() || !it->held) {
            ledger.diagnostics.push_back("item #" + std::to_string(item.index) + ": " + holder.render() +
                                         " loses " + what->render() + " without holding it");
            if (it == ledger.objects.end()) return;
          }
          it->held = false;
          it->events.push_back(item.index);
        } else {
          Holding h = it == ledger.objects.end() ? Holding{*what, false, {}} : *it;
          if (it != ledger.objects.end()) ledger.objects.erase(it);
          h.held = true;
          h.events.push_back(item.index);
          ledger.objects.push_back(std::move(h));
        }
      });
    }
    return ledger;
  }

  AnswerContent answer_question(const Proposition& q) const {
    AnswerContent a;
    a.echo = q.operators;
    LSPtr ls = resolve_all(q.ls);
    const auto* st = ls->as<State>();
    if (st && is_positional(st->pred.sense)) {
      const auto* loc = std::get_if<Referent>(&st->first);
      const Referent* theme = st->second ? std::get_if<Referent>(&*st->second) : nullptr;
      if (!loc || !theme) throw ContextError("unsupported", "malformed positional question");
      a.subject = *theme;
      if (loc->kind == ReferentKind::query) return where(a, *theme);
      return polar_position(a, *loc, *theme);
    }
    if (st && st->pred.sense == "p:have" && st->second) {
      const auto* who = std::get_if<Referent>(&st->first);
      const auto* what = std::get_if<Referent>(&*st->second);
      if (who && what && what->kind == ReferentKind::query) {
        a.subject = *who;
        auto held = holdings_of(*who);
        a.focus = what->focus;
        for (const auto& h : held.objects)
          if (h.held) a.bindings.push_back(Binding{h.object, std::nullopt, h.events.back(), {}});
        a.matches = a.bindings;
        a.count = a.bindings.size();
        a.kind = what->focus == Focus::how_many ? AnswerKind::count : AnswerKind::list;
        return a;
      }
    }
    return intersect(a, q, ls);
  }

  std::string trace() const {
    std::string out;
    for (const auto& i : items_) out += i.render() + "\n";
    return out;
  }

private:
  void append(const LSPtr& ls, const OperatorSet& ops, const std::string& source, std::size_t line) {
    items_.push_back(ContextItem{items_.size() + 1, ls, ops, source, line});
    if (ops.negative()) return;
    // Track possession as statements arrive so inconsistent stories are
    // flagged at the line that breaks them.
    visit_states(*ls, [&](const State& st, bool negated, bool) {
      if (st.pred.sense != "p:have" || !st.second) return;
      const auto* who = std::get_if<Referent>(&st.first);
      const auto* what = std::get_if<Referent>(&*st.second);
      if (!who || !what) return;
      auto& set = held_[who->key()];
      if (!negated) set.insert(what->key());
      else if (!set.erase(what->key()))
        diagnostics_.push_back("GIGO: item #" + std::to_string(items_.size()) + " (" + source + "): " + who->render() +
                               " cannot lose " + what->render() + " without holding it");
    });
  }

  LSPtr resolve_all(const LSPtr& ls) const {
    return map_referents(ls, [&](const Referent& r) { return r.has("pronoun") ? resolve_pronoun(r) : r; });
  }

  AnswerContent& where(AnswerContent& a, const Referent& who) const {
    a.focus = Focus::where;
    auto facts = positions_of(who);
    auto cur = current_position(who);
    for (const auto& f : facts)
      if (!f.negative) a.matches.push_back(Binding{f.location, f.pred, f.item, f.operators});
    if (a.echo.tense != Tense::past) {
      if (cur) a.bindings.push_back(Binding{cur->location, cur->pred, cur->item, cur->operators});
      return a;
    }
    for (const auto& b : a.matches)
      if (cfg_.include_current_position || !cur || b.item != cur->item) a.bindings.push_back(b);
    return a;
  }

  AnswerContent& polar_position(AnswerContent& a, const Referent& loc, const Referent& who) const {
    a.kind = AnswerKind::polar;
    auto cur = current_position(who);
    a.yes = cur && cur->location.key() == loc.key();
    if (cur) a.bindings.push_back(Binding{cur->location, cur->pred, cur->item, cur->operators});
    a.matches = a.bindings;
    if (!a.yes) {
      std::set<std::string> tried{who.key()};
      for (auto it = mentions_.rbegin(); it != mentions_.rend(); ++it) {
        if (it->kind != ReferentKind::entity || !it->has("person") || !tried.insert(it->key()).second) continue;
        auto other = current_position(*it);
        if (other && other->location.key() == loc.key()) {
          a.contrast = Binding{*it, other->pred, other->item, other->operators};
          break;
        }
      }
    }
    return a;
  }

  /// Whether the item records the object leaving someone other than `taker`.
  static bool has_source(const LogicalStructure& item, const Referent& taker) {
    bool found = false;
    visit_states(item, [&](const State& st, bool negated, bool) {
      if (!negated || st.pred.sense != "p:have") return;
      if (const auto* who = std::get_if<Referent>(&st.first); who && who->key() != taker.key()) found = true;
    });
    return found;
  }

  AnswerContent& intersect(AnswerContent& a, const Proposition& q, const LSPtr& ls) const {
    Focus focus = Focus::none;
    visit_referents(*ls, [&](const Referent& r) {
      if (r.kind == ReferentKind::query && focus == Focus::none) focus = r.focus;
    });
    a.focus = focus;
    if (!q.predicate.empty())
      if (const auto* s = lex_->find_sense(q.predicate)) a.receive = s->has("receive");
    for (const auto& item : items_) {
      if (item.operators.negative()) continue;
      auto m = unify(ls, item.ls, lex_);
      if (!m) continue;
      Referent value = focus == Focus::none ? Referent::unspecified() : m->bindings.at(focus);
      if (a.receive && cfg_.strict_receive) {
        Referent taker = value;
        if (focus == Focus::none)
          visit_states(*m->matched, [&](const State& st, bool negated, bool) {
            if (!negated && st.pred.sense == "p:have")
              if (const auto* w = std::get_if<Referent>(&st.first)) taker = *w;
          });
        if (!has_source(*item.ls, taker)) continue;
      }
      a.matches.push_back(Binding{value, m->position, item.index, item.operators});
    }
    if (focus == Focus::none) {
      a.kind = AnswerKind::polar;
      a.yes = !a.matches.empty();
      a.bindings = a.matches;
      return a;
    }
    a.kind = AnswerKind::content;
    a.bindings = a.matches;
    if (cfg_.babi_last && a.bindings.size() > 1) a.bindings.erase(a.bindings.begin(), a.bindings.end() - 1);
    return a;
  }

  const Lexicon* lex_;
  TrackerConfig cfg_;
  std::vector<ContextItem> items_;
  std::vector<Referent> mentions_;
  std::vector<std::string> diagnostics_;
  std::map<std::string, std::set<std::string>> held_;
};

}  // namespace rrgqa
