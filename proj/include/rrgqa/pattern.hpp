#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrgqa/error.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

/// One test inside a selector. `key` is one of:
///   w  surface word          a  attribute (reading or element)
///   c  sense category        l  element label
///   s  sense id              isa  sense reaches category via is-a
struct Condition {
  bool negated = false;
  std::string key;
  std::string value;

  std::string str() const { return (negated ? "!" : "") + key + ":" + value; }
  bool operator==(const Condition&) const = default;
};

struct Selector {
  std::vector<Condition> conditions;
  bool optional = false;

  std::string str() const {
    std::vector<std::string> parts;
    for (const auto& c : conditions) parts.push_back(c.str());
    return "sel:" + text::join(parts, "&") + (optional ? "?" : "");
  }
  bool operator==(const Selector&) const = default;
};

enum class PatternKind { literal, consolidation, predication };

inline std::string to_string(PatternKind k) {
  switch (k) {
    case PatternKind::literal: return "literal";
    case PatternKind::consolidation: return "consolidation";
    case PatternKind::predication: return "predication";
  }
  return "?";
}

inline std::optional<PatternKind> pattern_kind_from(std::string_view s) {
  if (s == "literal") return PatternKind::literal;
  if (s == "consolidation") return PatternKind::consolidation;
  if (s == "predication") return PatternKind::predication;
  return std::nullopt;
}

/// A phrase pattern as stored in the lexicon file:
///
///   phrase <id> <kind> trigger=<key> sel:<cond>[&<cond>]*[?] ... retain=<i>
///          [labels=<i>:<label>,...] [ops=<op>,...] [frame=<pred-id>|*]
///          [template=<key>]
///
/// Literal patterns are indexed off their first word; the others off any
/// sense, attribute or label named by `trigger`.
struct PhrasePattern {
  std::string id;
  PatternKind kind = PatternKind::consolidation;
  Condition trigger;
  std::vector<Selector> selectors;
  std::size_t retain = 0;
  std::vector<std::pair<std::size_t, std::string>> labels;
  std::vector<std::string> ops;
  std::string frame;
  std::string templ;

  bool has_op(std::string_view op) const {
    for (const auto& o : ops)
      if (o == op) return true;
    return false;
  }

  std::size_t required_count() const {
    std::size_t n = 0;
    for (const auto& s : selectors)
      if (!s.optional) ++n;
    return n;
  }

  std::string serialize() const {
    std::string out = "phrase " + id + " " + to_string(kind) + " trigger=" + trigger.key + ":" +
                      trigger.value;
    for (const auto& s : selectors) out += " " + s.str();
    out += " retain=" + std::to_string(retain);
    if (!labels.empty()) {
      std::vector<std::string> parts;
      for (const auto& [i, l] : labels) parts.push_back(std::to_string(i) + ":" + l);
      out += " labels=" + text::join(parts, ",");
    }
    if (!ops.empty()) out += " ops=" + text::join(ops, ",");
    if (!frame.empty()) out += " frame=" + frame;
    if (!templ.empty()) out += " template=" + templ;
    return out;
  }

  bool operator==(const PhrasePattern&) const = default;
};

namespace detail {

inline Condition parse_condition(std::string_view tok, std::size_t line) {
  Condition c;
  if (!tok.empty() && tok.front() == '!') {
    c.negated = true;
    tok.remove_prefix(1);
  }
  auto colon = tok.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size())
    throw ParseError(line, "malformed selector condition '" + std::string(tok) + "'");
  c.key = std::string(tok.substr(0, colon));
  c.value = std::string(tok.substr(colon + 1));
  static const std::vector<std::string> keys = {"w", "a", "c", "l", "s", "isa"};
  if (std::find(keys.begin(), keys.end(), c.key) == keys.end())
    throw ParseError(line, "unknown selector key '" + c.key + "'");
  return c;
}

inline Selector parse_selector(std::string_view body, std::size_t line) {
  Selector s;
  if (!body.empty() && body.back() == '?') {
    s.optional = true;
    body.remove_suffix(1);
  }
  for (const auto& part : text::split(body, '&')) s.conditions.push_back(parse_condition(part, line));
  if (s.conditions.empty()) throw ParseError(line, "empty selector");
  return s;
}

inline std::size_t parse_index(std::string_view s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError(line, "expected selector index, got '" + std::string(s) + "'");
  return static_cast<std::size_t>(std::stoul(std::string(s)));
}

}  // namespace detail

/// Parses the tokens following the `phrase` keyword.
inline PhrasePattern parse_phrase_record(const std::vector<std::string>& toks, std::size_t line) {
  if (toks.size() < 4) throw ParseError(line, "phrase record needs id, kind, trigger and selectors");
  PhrasePattern p;
  p.id = toks[1];
  auto kind = pattern_kind_from(toks[2]);
  if (!kind) throw ParseError(line, "unknown phrase kind '" + toks[2] + "'");
  p.kind = *kind;
  bool have_trigger = false, have_retain = false;
  for (std::size_t i = 3; i < toks.size(); ++i) {
    std::string_view t = toks[i];
    if (text::starts_with(t, "trigger=")) {
      p.trigger = detail::parse_condition(t.substr(8), line);
      have_trigger = true;
    } else if (text::starts_with(t, "sel:")) {
      p.selectors.push_back(detail::parse_selector(t.substr(4), line));
    } else if (text::starts_with(t, "retain=")) {
      p.retain = detail::parse_index(t.substr(7), line);
      have_retain = true;
    } else if (text::starts_with(t, "labels=")) {
      for (const auto& item : text::split(t.substr(7), ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ParseError(line, "label entry needs <i>:<label>");
        p.labels.emplace_back(detail::parse_index(std::string_view(item).substr(0, colon), line),
                              item.substr(colon + 1));
      }
    } else if (text::starts_with(t, "ops=")) {
      p.ops = text::split(t.substr(4), ',');
    } else if (text::starts_with(t, "frame=")) {
      p.frame = std::string(t.substr(6));
    } else if (text::starts_with(t, "template=")) {
      p.templ = std::string(t.substr(9));
    } else {
      throw ParseError(line, "unexpected phrase field '" + std::string(t) + "'");
    }
  }
  if (!have_trigger) throw ParseError(line, "phrase " + p.id + " has no trigger");
  if (!have_retain) throw ParseError(line, "phrase " + p.id + " has no retain index");
  if (p.selectors.empty()) throw ParseError(line, "phrase " + p.id + " has no selectors");
  if (p.retain >= p.selectors.size()) throw ParseError(line, "retain index out of range");
  for (const auto& [i, l] : p.labels)
    if (i >= p.selectors.size()) throw ParseError(line, "label index out of range");
  // A consolidation must strictly shrink the element sequence, otherwise the
  // fixpoint loop would not terminate.
  if (p.kind != PatternKind::predication && p.required_count() < 2)
    throw ParseError(line, "phrase " + p.id + " must cover at least two elements");
  if (p.kind == PatternKind::literal) {
    if (p.trigger.key != "w") throw ParseError(line, "literal phrases are indexed off a word");
    for (const auto& s : p.selectors)
      if (s.optional || s.conditions.size() != 1 || s.conditions[0].key != "w" ||
          s.conditions[0].negated)
        throw ParseError(line, "literal phrase selectors must be plain words");
    if (p.selectors.front().conditions[0].value != p.trigger.value)
      throw ParseError(line, "literal phrase trigger must be its first word");
  }
  bool trigger_present = false;
  for (const auto& s : p.selectors)
    for (const auto& c : s.conditions)
      if (!c.negated && c.key == p.trigger.key && c.value == p.trigger.value) trigger_present = true;
  if (!trigger_present)
    throw ParseError(line, "phrase " + p.id + " trigger does not occur in its selectors");
  return p;
}

}  // namespace rrgqa
