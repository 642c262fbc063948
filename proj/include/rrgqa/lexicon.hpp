#pragma once

#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rrgqa/error.hpp"
#include "rrgqa/pattern.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

using SenseId = std::string;

/// The three semantic universals. There is deliberately no noun/verb/adjective.
enum class Category { referent, predicate, modifier };

inline std::string to_string(Category c) {
  switch (c) {
    case Category::referent: return "referent";
    case Category::predicate: return "predicate";
    case Category::modifier: return "modifier";
  }
  return "?";
}

inline std::optional<Category> category_from(std::string_view s) {
  if (s == "referent") return Category::referent;
  if (s == "predicate") return Category::predicate;
  if (s == "modifier") return Category::modifier;
  return std::nullopt;
}

struct WordSense {
  SenseId id;
  Category category = Category::referent;
  AttrSet attrs;
  std::string gloss;

  bool has(std::string_view a) const { return attrs.count(a) > 0; }
  bool operator==(const WordSense&) const = default;
};

struct SenseLink {
  SenseId sense;
  AttrSet attrs;
  bool operator==(const SenseLink&) const = default;
};

struct WordForm {
  std::string surface;
  std::vector<SenseLink> sense_links;
  bool operator==(const WordForm&) const = default;
};

enum class RelationKind { is_a, has_a, entails, does_x_actor, does_x_undergoer };

inline std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::is_a: return "is-a";
    case RelationKind::has_a: return "has-a";
    case RelationKind::entails: return "entails";
    case RelationKind::does_x_actor: return "does-x-actor";
    case RelationKind::does_x_undergoer: return "does-x-undergoer";
  }
  return "?";
}

inline std::optional<RelationKind> relation_kind_from(std::string_view s) {
  if (s == "is-a") return RelationKind::is_a;
  if (s == "has-a") return RelationKind::has_a;
  if (s == "entails") return RelationKind::entails;
  if (s == "does-x-actor") return RelationKind::does_x_actor;
  if (s == "does-x-undergoer") return RelationKind::does_x_undergoer;
  return std::nullopt;
}

struct SemanticRelation {
  SenseId from;
  RelationKind kind = RelationKind::is_a;
  SenseId to;
  bool operator==(const SemanticRelation&) const = default;
};

/// Role names a frame may use.
inline bool is_role_name(std::string_view r) {
  return r == "actor" || r == "undergoer" || r == "destination" || r == "source" ||
         r == "recipient";
}

struct FrameRole {
  std::string role;
  SenseId category;
  bool required = false;
  bool operator==(const FrameRole&) const = default;
};

struct SelectionalFrame {
  SenseId predicate;
  std::vector<FrameRole> roles;

  const FrameRole* find(std::string_view role) const {
    for (const auto& r : roles)
      if (r.role == role) return &r;
    return nullptr;
  }
  bool operator==(const SelectionalFrame&) const = default;
};

/// The semantic network: senses, forms, relations, frames and the phrase
/// patterns the matcher runs. Immutable once loaded.
class Lexicon {
public:
  const std::map<SenseId, WordSense>& senses() const { return senses_; }
  const std::map<std::string, WordForm>& forms() const { return forms_; }
  const std::vector<SemanticRelation>& relations() const { return relations_; }
  const std::map<SenseId, SelectionalFrame>& frames() const { return frames_; }
  const std::vector<PhrasePattern>& patterns() const { return patterns_; }

  bool has_sense(std::string_view id) const { return senses_.find(std::string(id)) != senses_.end(); }

  const WordSense& sense(std::string_view id) const {
    auto it = senses_.find(std::string(id));
    if (it == senses_.end()) throw LexiconError("unknown-sense", "unknown sense '" + std::string(id) + "'");
    return it->second;
  }

  const WordSense* find_sense(std::string_view id) const {
    auto it = senses_.find(std::string(id));
    return it == senses_.end() ? nullptr : &it->second;
  }

  /// All senses linked to a surface form, with inflectional attributes.
  /// Unknown forms give an empty list.
  std::vector<SenseLink> senses_of(std::string_view form) const {
    auto it = forms_.find(text::lower(form));
    if (it == forms_.end()) return {};
    return it->second.sense_links;
  }

  bool knows_form(std::string_view form) const { return forms_.count(text::lower(form)) > 0; }

  /// True iff `sense` reaches `category` over zero or more is-a edges.
  bool holds_category(std::string_view sense, std::string_view category) const {
    require_sense(sense);
    require_sense(category);
    return reaches(std::string(sense), std::string(category), RelationKind::is_a);
  }

  /// True iff `pred` equals `target` or reaches it via entails/is-a edges.
  bool entails(std::string_view pred, std::string_view target) const {
    if (pred == target) return true;
    if (!has_sense(pred) || !has_sense(target)) return false;
    std::deque<std::string> todo{std::string(pred)};
    std::unordered_set<std::string> seen{std::string(pred)};
    while (!todo.empty()) {
      auto cur = todo.front();
      todo.pop_front();
      if (cur == target) return true;
      for (auto idx : outgoing(cur)) {
        const auto& r = relations_[idx];
        if ((r.kind == RelationKind::entails || r.kind == RelationKind::is_a) && seen.insert(r.to).second)
          todo.push_back(r.to);
      }
    }
    return false;
  }

  const SelectionalFrame* frame_of(std::string_view pred) const {
    auto it = frames_.find(std::string(pred));
    return it == frames_.end() ? nullptr : &it->second;
  }

  /// Does `filler` fit the category the frame assigns to `role`?
  bool selectional_fit(const SelectionalFrame& frame, std::string_view role, std::string_view filler) const {
    const auto* r = frame.find(role);
    if (!r)
      throw LexiconError("unknown-role", "frame " + frame.predicate + " has no role '" + std::string(role) + "'");
    return holds_category(filler, r->category);
  }

  /// has-a parts and does-x associations of a referent, in file order. Used
  /// as the retry set when a direct selectional fit fails.
  std::vector<std::pair<SenseId, RelationKind>> qualia_expand(std::string_view referent) const {
    require_sense(referent);
    std::vector<std::pair<SenseId, RelationKind>> out;
    for (auto idx : outgoing(std::string(referent))) {
      const auto& r = relations_[idx];
      if (r.kind == RelationKind::has_a || r.kind == RelationKind::does_x_actor ||
          r.kind == RelationKind::does_x_undergoer)
        out.emplace_back(r.to, r.kind);
    }
    return out;
  }

  /// The surface form of `sense` carrying every attribute in `want`, if any.
  std::optional<std::string> form_with(std::string_view sense, const AttrSet& want) const {
    for (const auto& [surface, form] : forms_)
      for (const auto& link : form.sense_links)
        if (link.sense == sense &&
            std::all_of(want.begin(), want.end(), [&](const std::string& a) { return link.attrs.count(a) > 0; }))
          return surface;
    return std::nullopt;
  }

  /// Display name of a sense: the `lemma:<name>` attribute when present,
  /// otherwise the id without its `x:` prefix.
  std::string lemma(std::string_view id) const {
    if (const auto* s = find_sense(id))
      for (const auto& a : s->attrs)
        if (text::starts_with(a, "lemma:")) return a.substr(6);
    auto colon = id.find(':');
    return std::string(colon == std::string_view::npos ? id : id.substr(colon + 1));
  }

  /// Writes the network back out in the record format `load_lexicon` reads.
  std::string serialize() const {
    std::ostringstream out;
    for (const auto& [id, s] : senses_)
      out << "sense " << id << ' ' << to_string(s.category) << " {" << text::attrs_to_string(s.attrs)
          << "} \"" << s.gloss << "\"\n";
    for (const auto& [surface, f] : forms_)
      for (const auto& l : f.sense_links)
        out << "form " << surface << " -> " << l.sense << " {" << text::attrs_to_string(l.attrs) << "}\n";
    for (const auto& r : relations_) out << "rel " << r.from << ' ' << to_string(r.kind) << ' ' << r.to << '\n';
    for (const auto& [pred, f] : frames_) {
      out << "frame " << pred;
      for (const auto& r : f.roles) out << ' ' << r.role << ':' << r.category << (r.required ? "!" : "");
      out << '\n';
    }
    for (const auto& p : patterns_) out << p.serialize() << '\n';
    return out.str();
  }

  bool operator==(const Lexicon& o) const {
    return senses_ == o.senses_ && forms_ == o.forms_ && relations_ == o.relations_ &&
           frames_ == o.frames_ && patterns_ == o.patterns_;
  }

private:
  friend class LexiconBuilder;

  void require_sense(std::string_view id) const {
    if (!has_sense(id)) throw LexiconError("unknown-sense", "unknown sense '" + std::string(id) + "'");
  }

  const std::vector<std::size_t>& outgoing(const std::string& id) const {
    static const std::vector<std::size_t> none;
    auto it = by_from_.find(id);
    return it == by_from_.end() ? none : it->second;
  }

  bool reaches(const std::string& from, const std::string& to, RelationKind kind) const {
    std::deque<std::string> todo{from};
    std::unordered_set<std::string> seen{from};
    while (!todo.empty()) {
      auto cur = todo.front();
      todo.pop_front();
      if (cur == to) return true;
      for (auto idx : outgoing(cur)) {
        const auto& r = relations_[idx];
        if (r.kind == kind && seen.insert(r.to).second) todo.push_back(r.to);
      }
    }
    return false;
  }

  std::map<SenseId, WordSense> senses_;
  std::map<std::string, WordForm> forms_;
  std::vector<SemanticRelation> relations_;
  std::map<SenseId, SelectionalFrame> frames_;
  std::vector<PhrasePattern> patterns_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_from_;
};

/// Single-writer construction of a Lexicon; `build()` validates referential
/// integrity and hands back the immutable network.
class LexiconBuilder {
public:
  void add_sense(WordSense s, std::size_t line = 0) {
    for (const auto& a : s.attrs) reject_pos_tag(a, line);
    if (lex_.senses_.count(s.id)) throw ParseError(line, "duplicate sense '" + s.id + "'");
    lex_.senses_.emplace(s.id, std::move(s));
  }

  void add_form(std::string surface, SenseLink link, std::size_t line = 0) {
    for (const auto& a : link.attrs) reject_pos_tag(a, line);
    surface = text::lower(surface);
    if (surface.empty()) throw ParseError(line, "empty form");
    auto& f = lex_.forms_[surface];
    f.surface = surface;
    f.sense_links.push_back(std::move(link));
    form_lines_.emplace_back(surface, line);
  }

  void add_relation(SemanticRelation r, std::size_t line = 0) {
    lex_.relations_.push_back(std::move(r));
    rel_lines_.push_back(line);
  }

  void add_frame(SelectionalFrame f, std::size_t line = 0) {
    if (f.roles.empty()) throw ParseError(line, "frame " + f.predicate + " has no roles");
    AttrSet seen;
    for (const auto& r : f.roles) {
      if (!is_role_name(r.role)) throw ParseError(line, "unknown role name '" + r.role + "'");
      if (!seen.insert(r.role).second) throw ParseError(line, "duplicate role '" + r.role + "'");
    }
    if (lex_.frames_.count(f.predicate)) throw ParseError(line, "duplicate frame for " + f.predicate);
    frame_lines_[f.predicate] = line;
    lex_.frames_.emplace(f.predicate, std::move(f));
  }

  void add_pattern(PhrasePattern p, std::size_t line = 0) {
    for (const auto& q : lex_.patterns_)
      if (q.id == p.id) throw ParseError(line, "duplicate phrase id '" + p.id + "'");
    lex_.patterns_.push_back(std::move(p));
    pattern_lines_.push_back(line);
  }

  Lexicon build() && {
    auto need = [&](const std::string& id, std::size_t line, const std::string& what) {
      if (!lex_.has_sense(id))
        throw LexiconError("dangling", "line " + std::to_string(line) + ": " + what + " references unknown sense '" + id + "'");
    };
    for (const auto& [surface, line] : form_lines_) {
      (void)line;
      for (const auto& l : lex_.forms_.at(surface).sense_links) need(l.sense, line, "form " + surface);
    }
    for (std::size_t i = 0; i < lex_.relations_.size(); ++i) {
      const auto& r = lex_.relations_[i];
      need(r.from, rel_lines_[i], "relation");
      need(r.to, rel_lines_[i], "relation");
      if (r.kind == RelationKind::entails && lex_.sense(r.to).category != Category::predicate)
        throw LexiconError("entails-target", "line " + std::to_string(rel_lines_[i]) + ": entails must target a predicate");
    }
    for (const auto& [pred, f] : lex_.frames_) {
      need(pred, frame_lines_[pred], "frame");
      for (const auto& r : f.roles) need(r.category, frame_lines_[pred], "frame role");
    }
    for (std::size_t i = 0; i < lex_.patterns_.size(); ++i) {
      const auto& p = lex_.patterns_[i];
      for (const auto& s : p.selectors)
        for (const auto& c : s.conditions)
          if (c.key == "s" || c.key == "isa") need(c.value, pattern_lines_[i], "phrase " + p.id);
      if (!p.frame.empty() && p.frame != "*") need(p.frame, pattern_lines_[i], "phrase " + p.id);
    }
    for (const auto& [id, s] : lex_.senses_) {
      if (s.category == Category::referent && s.has("location") && !s.has("category")) {
        int dims = int(s.has("enclosure")) + int(s.has("surface")) + int(s.has("locale"));
        if (dims != 1)
          throw LexiconError("dimensionality", "location " + id + " needs exactly one of enclosure/surface/locale");
      }
    }
    lex_.by_from_.clear();
    for (std::size_t i = 0; i < lex_.relations_.size(); ++i) lex_.by_from_[lex_.relations_[i].from].push_back(i);
    check_isa_acyclic();
    return std::move(lex_);
  }

private:
  static void reject_pos_tag(std::string_view a, std::size_t line) {
    static const std::vector<std::string_view> banned = {"noun", "verb", "adjective", "adverb", "pronoun-pos"};
    for (auto b : banned)
      if (a == b) throw ParseError(line, "part-of-speech tag '" + std::string(a) + "' is not allowed");
  }

  void check_isa_acyclic() const {
    // 0 = unvisited, 1 = on stack, 2 = done
    std::unordered_map<std::string, int> state;
    std::vector<std::pair<std::string, std::size_t>> stack;
    for (const auto& [id, _] : lex_.senses_) {
      if (state[id]) continue;
      stack.emplace_back(id, 0);
      state[id] = 1;
      while (!stack.empty()) {
        auto& [cur, next] = stack.back();
        const auto& out = lex_.outgoing(cur);
        bool pushed = false;
        while (next < out.size()) {
          const auto& r = lex_.relations_[out[next++]];
          if (r.kind != RelationKind::is_a) continue;
          int& st = state[r.to];
          if (st == 1) throw LexiconError("isa-cycle", "is-a cycle through '" + r.to + "'");
          if (st == 0) {
            st = 1;
            stack.emplace_back(r.to, 0);
            pushed = true;
            break;
          }
        }
        if (!pushed) {
          state[stack.back().first] = 2;
          stack.pop_back();
        }
      }
    }
  }

  Lexicon lex_;
  std::vector<std::pair<std::string, std::size_t>> form_lines_;
  std::vector<std::size_t> rel_lines_;
  std::map<std::string, std::size_t> frame_lines_;
  std::vector<std::size_t> pattern_lines_;
};

namespace detail {

inline AttrSet parse_attr_block(std::string_view tok, std::size_t line) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    throw ParseError(line, "expected {attr,...}, got '" + std::string(tok) + "'");
  AttrSet out;
  auto body = tok.substr(1, tok.size() - 2);
  if (text::trim(body).empty()) return out;
  for (const auto& a : text::split(body, ',')) {
    auto t = text::trim(a);
    if (t.empty()) throw ParseError(line, "empty attribute");
    out.insert(std::string(t));
  }
  return out;
}

}  // namespace detail

/// Parses one lexicon document into `builder`.
inline void parse_lexicon_into(LexiconBuilder& builder, std::string_view document) {
  std::size_t line_no = 0;
  std::istringstream in{std::string(document)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    // '#' starts a comment unless it sits inside the quoted gloss.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = text::trim(line);
    if (line.empty()) continue;

    if (text::starts_with(line, "sense ")) {
      auto q = line.find('"');
      std::string gloss;
      std::string_view head = line;
      if (q != std::string_view::npos) {
        auto q2 = line.rfind('"');
        if (q2 == q) throw ParseError(line_no, "unterminated gloss");
        gloss = std::string(line.substr(q + 1, q2 - q - 1));
        head = line.substr(0, q);
      }
      auto toks = text::split_ws(head);
      if (toks.size() != 4) throw ParseError(line_no, "sense record is: sense <id> <category> {attrs} \"gloss\"");
      auto cat = category_from(toks[2]);
      if (!cat) throw ParseError(line_no, "category must be referent, predicate or modifier, got '" + toks[2] + "'");
      builder.add_sense(WordSense{toks[1], *cat, detail::parse_attr_block(toks[3], line_no), gloss}, line_no);
    } else if (text::starts_with(line, "form ")) {
      auto toks = text::split_ws(line);
      if (toks.size() < 4 || toks.size() > 5 || toks[2] != "->")
        throw ParseError(line_no, "form record is: form <surface> -> <sense-id> {attrs}");
      AttrSet attrs = toks.size() == 5 ? detail::parse_attr_block(toks[4], line_no) : AttrSet{};
      builder.add_form(toks[1], SenseLink{toks[3], attrs}, line_no);
    } else if (text::starts_with(line, "rel ")) {
      auto toks = text::split_ws(line);
      if (toks.size() != 4) throw ParseError(line_no, "rel record is: rel <id> <kind> <id>");
      auto kind = relation_kind_from(toks[2]);
      if (!kind) throw ParseError(line_no, "unknown relation kind '" + toks[2] + "'");
      builder.add_relation(SemanticRelation{toks[1], *kind, toks[3]}, line_no);
    } else if (text::starts_with(line, "frame ")) {
      auto toks = text::split_ws(line);
      if (toks.size() < 3) throw ParseError(line_no, "frame record needs a predicate and roles");
      SelectionalFrame f{toks[1], {}};
      for (std::size_t i = 2; i < toks.size(); ++i) {
        std::string_view t = toks[i];
        FrameRole r;
        if (!t.empty() && t.back() == '!') {
          r.required = true;
          t.remove_suffix(1);
        }
        auto colon = t.find(':');
        if (colon == std::string_view::npos) throw ParseError(line_no, "frame role is <role>:<category>[!]");
        r.role = std::string(t.substr(0, colon));
        r.category = std::string(t.substr(colon + 1));
        f.roles.push_back(std::move(r));
      }
      builder.add_frame(std::move(f), line_no);
    } else if (text::starts_with(line, "phrase ")) {
      builder.add_pattern(parse_phrase_record(text::split_ws(line), line_no), line_no);
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(line.substr(0, line.find(' '))) + "'");
    }
  }
}

inline Lexicon load_lexicon(std::string_view document) {
  LexiconBuilder b;
  parse_lexicon_into(b, document);
  return std::move(b).build();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads several documents into one network (e.g. vocabulary + phrases).
inline Lexicon load_lexicon_files(const std::vector<std::string>& paths) {
  LexiconBuilder b;
  for (const auto& p : paths) {
    try {
      parse_lexicon_into(b, read_file(p));
    } catch (const ParseError& e) {
      std::string msg = e.what();
      auto colon = msg.find(": ");
      throw ParseError(e.line(), p + ": " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
    }
  }
  return std::move(b).build();
}

/// The three standard documents of a lexicon directory, in load order.
inline std::vector<std::string> lexicon_files_in(const std::string& dir) {
  std::string base = dir.empty() || dir.back() == '/' ? dir : dir + "/";
  return {base + "babi.lex", base + "wsd.lex", base + "phrases.lex"};
}

inline Lexicon load_lexicon_dir(const std::string& dir) { return load_lexicon_files(lexicon_files_in(dir)); }

}  // namespace rrgqa
