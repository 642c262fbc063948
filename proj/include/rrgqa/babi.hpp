#pragma once

#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rrgqa/context.hpp"
#include "rrgqa/error.hpp"
#include "rrgqa/matcher.hpp"
#include "rrgqa/nlg.hpp"
#include "rrgqa/text.hpp"

namespace rrgqa {

struct BabiRecord {
  std::size_t line_id = 0;
  std::string text;
  std::optional<std::string> expected;
  std::vector<std::size_t> support;

  bool is_question() const { return expected.has_value(); }
};

using Story = std::vector<BabiRecord>;

/// Reads `<id> <text>` and `<id> <question>\t<answer>\t<support ids>` lines.
/// A story ends when the id drops back to 1.
inline std::vector<Story> parse_babi(std::string_view document) {
  std::vector<Story> stories;
  std::istringstream in{std::string(document)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty()) continue;
    std::size_t i = 0;
    while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i]))) ++i;
    if (i == 0 || i == raw.size() || (raw[i] != ' ' && raw[i] != '\t'))
      throw ParseError(line_no, "expected '<id> <text>', got '" + raw + "'");
    BabiRecord r;
    r.line_id = std::stoul(raw.substr(0, i));
    if (r.line_id == 0) throw ParseError(line_no, "line ids start at 1");
    auto fields = text::split(std::string_view(raw).substr(i + 1), '\t');
    r.text = std::string(text::trim(fields[0]));
    if (r.text.empty()) throw ParseError(line_no, "empty sentence");
    if (fields.size() > 1) {
      r.expected = std::string(text::trim(fields[1]));
      if (fields.size() > 2)
        for (const auto& s : text::split_ws(fields[2])) {
          if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
            throw ParseError(line_no, "support ids must be numbers, got '" + s + "'");
          r.support.push_back(std::stoul(s));
        }
    }
    if (r.line_id == 1 || stories.empty()) stories.emplace_back();
    stories.back().push_back(std::move(r));
  }
  return stories;
}

enum class Status { passed, failed, gigo };

inline std::string to_string(Status s) {
  return s == Status::passed ? "passed" : s == Status::failed ? "failed" : "gigo";
}

/// One match behind an answer, with what the audit rules need to know.
struct Evidence {
  std::string value;
  std::size_t line = 0;
  /// The item moves the object from one party to another.
  bool has_source = false;
  /// The item is causative with the source acting (give, hand, pass).
  bool give = false;
};

struct RunResult {
  std::size_t story_id = 0;
  std::size_t line_id = 0;
  std::string question;
  std::string expected;
  std::string produced;
  Status status = Status::failed;
  std::vector<std::size_t> support;
  /// Every match in context order; with babi_last the last one is the answer.
  std::vector<Evidence> evidence;
  bool receive_question = false;
  std::string rule;
  std::string explanation;
  std::string trace;
  std::vector<std::string> diagnostics;
};

struct TaskConfig {
  bool babi_last = true;
  bool strict_take = false;
  bool strict_receive = false;
  bool include_current_position = true;
  RealizationOptions realization{};
  unsigned threads = 1;
};

/// Lowercase, drop a trailing period and a leading article or preposition;
/// comma lists become sorted sets.
inline std::string normalize_answer(std::string_view s) {
  std::vector<std::string> parts;
  for (auto p : text::split(text::lower(s), ',')) {
    std::string t(text::trim(p));
    while (!t.empty() && t.back() == '.') t.pop_back();
    for (const char* lead : {"the ", "in ", "on ", "at ", "a "})
      if (text::starts_with(t, lead)) t = t.substr(std::string_view(lead).size());
    if (text::starts_with(t, "the ")) t = t.substr(4);
    parts.push_back(std::string(text::trim(t)));
  }
  std::sort(parts.begin(), parts.end());
  return text::join(parts, ",");
}

/// Registered dataset-error rules.
///   G1: the answer comes from a give-type transfer after every supporting
///       line, and the expected value was given earlier.
///   G2: a "received" question where the produced holder acquired the
///       object unaided while the expected one was handed it.
inline std::optional<std::pair<std::string, std::string>> audit_mismatch(const RunResult& r) {
  if (r.status == Status::passed || r.evidence.empty()) return std::nullopt;
  const Evidence& got = r.evidence.back();
  const std::string expected = normalize_answer(r.expected);
  std::size_t last_support = r.support.empty() ? 0 : *std::max_element(r.support.begin(), r.support.end());
  if (!r.receive_question && got.give && got.line > last_support) {
    for (const auto& e : r.evidence)
      if (e.line <= last_support && normalize_answer(e.value) == expected)
        return std::make_pair(std::string("G1"),
                              "line " + std::to_string(got.line) + " also gives '" + got.value +
                                  "' after the supporting line " + std::to_string(last_support) +
                                  "; the expected answer ignores it");
  }
  if (r.receive_question && !got.has_source) {
    for (const auto& e : r.evidence)
      if (e.give && normalize_answer(e.value) == expected)
        return std::make_pair(std::string("G2"),
                              "'" + got.value + "' acquired the object unaided at line " + std::to_string(got.line) +
                                  "; the expected answer counts only the transfer at line " + std::to_string(e.line));
  }
  return std::nullopt;
}

namespace detail {

inline Evidence evidence_for(const Tracker& t, const Binding& b, const RealizationOptions& opt) {
  Evidence e;
  AnswerContent single;
  single.kind = AnswerKind::content;
  single.bindings = {b};
  e.value = realize_answer(single, RealizationOptions{AnswerMode::keyword, opt.polar});
  const auto& item = t.items().at(b.item - 1);
  e.line = item.line;
  bool causative = false;
  std::string actor;
  if (const auto* l = item.ls->as<Linked>(); l && l->link == Link::cause)
    if (const auto* act = l->left->as<Activity>()) {
      causative = true;
      actor = act->actor.key();
    }
  visit_states(*item.ls, [&](const State& st, bool negated, bool) {
    if (!negated || st.pred.sense != "p:have") return;
    const auto* who = std::get_if<Referent>(&st.first);
    if (!who) return;
    e.has_source = true;
    if (causative && who->key() == actor) e.give = true;
  });
  return e;
}

}  // namespace detail

/// Cache of parsed sentences shared across the stories of a run.
class ParseCache {
public:
  explicit ParseCache(const Matcher& m) : m_(m) {}

  std::vector<Proposition> get(const std::string& sentence) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(sentence);
      if (it != cache_.end()) return it->second;
    }
    auto props = m_.parse_utterance(sentence);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(sentence, props);
    return props;
  }

private:
  const Matcher& m_;
  std::mutex mu_;
  std::map<std::string, std::vector<Proposition>> cache_;
};

inline std::vector<RunResult> run_story(const Lexicon& lex, ParseCache& cache, const Story& story,
                                        std::size_t story_id, const TaskConfig& cfg) {
  TrackerConfig tc{cfg.include_current_position, cfg.babi_last, cfg.strict_receive};
  Tracker tracker(lex, tc);
  std::vector<RunResult> out;
  for (const auto& rec : story) {
    auto props = cache.get(rec.text);
    if (props.size() != 1)
      throw Error("ambiguous", "line " + std::to_string(rec.line_id) + ": '" + rec.text + "' has " +
                                   std::to_string(props.size()) + " readings");
    const auto& prop = props.front();
    if (!rec.is_question()) {
      tracker.ingest(prop, rec.line_id);
      continue;
    }
    RunResult r;
    r.story_id = story_id;
    r.line_id = rec.line_id;
    r.question = rec.text;
    r.expected = *rec.expected;
    r.support = rec.support;
    auto answer = tracker.answer_question(prop);
    r.produced = realize_answer(answer, cfg.realization);
    r.receive_question = answer.receive;
    for (const auto& b : answer.matches) r.evidence.push_back(detail::evidence_for(tracker, b, cfg.realization));
    r.trace = tracker.trace();
    r.diagnostics = tracker.diagnostics();
    if (normalize_answer(r.produced) == normalize_answer(r.expected)) {
      r.status = Status::passed;
    } else if (auto g = audit_mismatch(r)) {
      r.status = Status::gigo;
      r.rule = g->first;
      r.explanation = g->second;
    } else {
      r.status = Status::failed;
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Words across the stories that the lexicon does not know, sorted.
inline std::vector<std::string> vocabulary_gaps(const Matcher& m, const std::vector<Story>& stories) {
  std::set<std::string> missing, seen;
  for (const auto& s : stories)
    for (const auto& r : s)
      if (seen.insert(r.text).second)
        for (auto& w : m.unknown_words(r.text)) missing.insert(w);
  return {missing.begin(), missing.end()};
}

/// Runs every story with a fresh tracker. Results keep story order
/// regardless of thread count.
inline std::vector<RunResult> run_task(const Lexicon& lex, const std::vector<Story>& stories, const TaskConfig& cfg = {}) {
  Matcher matcher(lex, MatcherConfig{cfg.strict_take});
  auto gaps = vocabulary_gaps(matcher, stories);
  if (!gaps.empty()) throw Error("vocabulary", "words missing from the lexicon: " + text::join(gaps, ", "));
  ParseCache cache(matcher);
  std::vector<std::vector<RunResult>> per_story(stories.size());
  unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(stories.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < stories.size(); ++i) per_story[i] = run_story(lex, cache, stories[i], i + 1, cfg);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t i = t; i < stories.size(); i += threads)
          per_story[i] = run_story(lex, cache, stories[i], i + 1, cfg);
      }));
    for (auto& j : jobs) j.get();
  }
  std::vector<RunResult> out;
  for (auto& v : per_story) out.insert(out.end(), v.begin(), v.end());
  return out;
}

struct Score {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t gigo = 0;

  bool empty() const { return total == 0; }
  /// gigo counts as a failure.
  double strict() const { return total ? 100.0 * double(passed) / double(total) : 0.0; }
  /// gigo rows are excluded.
  double audited() const {
    auto n = total - gigo;
    return n ? 100.0 * double(passed) / double(n) : 0.0;
  }
};

inline Score score(const std::vector<RunResult>& results) {
  Score s;
  for (const auto& r : results) {
    ++s.total;
    if (r.status == Status::passed) ++s.passed;
    else if (r.status == Status::gigo) ++s.gigo;
    else ++s.failed;
  }
  return s;
}

inline std::string csv_field(const std::string& s) {
  bool quote = s.find_first_of(",\"\n\r \t") != std::string::npos;
  if (!quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const std::vector<RunResult>& results) {
  std::string out = "story_id,input,expected,answer,status\n";
  for (const auto& r : results)
    out += std::to_string(r.story_id) + "," + csv_field(r.question) + "," + csv_field(r.expected) + "," +
           csv_field(r.produced) + "," + to_string(r.status) + "\n";
  return out;
}

inline void export_csv(const std::vector<RunResult>& results, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", "cannot write " + path);
  f << to_csv(results);
  if (!f) throw Error("io", "write failed for " + path);
}

}  // namespace rrgqa
