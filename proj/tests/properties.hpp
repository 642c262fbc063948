#pragma once

// Property checks shared by the gtest suite and the acceptance binary.
// Each returns the number of cases tried and a description of every
// violation found.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "story_gen.hpp"

namespace props {

using namespace rrgqa;

struct Outcome {
  std::size_t cases = 0;
  std::vector<std::string> failures;

  bool ok() const { return cases > 0 && failures.empty(); }
  void fail(std::string s) {
    if (failures.size() < 20) failures.push_back(std::move(s));
    else if (failures.size() == 20) failures.push_back("...");
  }
};

inline const Matcher& matcher() {
  static const Matcher m(storygen::lexicon());
  return m;
}

// --- (a) the context only grows, and nothing stored ever changes ---------

struct Snapshot {
  const LogicalStructure* ls;
  std::size_t index;
  std::string render;
};

inline std::vector<Snapshot> snapshot(const Tracker& t) {
  std::vector<Snapshot> out;
  for (const auto& i : t.items()) out.push_back({i.ls.get(), i.index, i.render()});
  return out;
}

inline Outcome append_only(unsigned seed, std::size_t sequences = 200, std::size_t ops = 30) {
  Outcome o;
  std::mt19937 rng(seed);
  for (std::size_t s = 0; s < sequences; ++s) {
    storygen::World w;
    Tracker t(storygen::lexicon());
    for (std::size_t k = 0; k < ops; ++k) {
      ++o.cases;
      auto before = snapshot(t);
      int op = std::uniform_int_distribution<int>(0, 3)(rng);
      if (op <= 1) {
        t.ingest(matcher().parse_utterance(storygen::step(w, rng, true)).front());
      } else if (op == 2) {
        auto qs = storygen::questions_for(w, rng);
        t.answer_question(matcher().parse_utterance(qs[rng() % qs.size()].text).front());
      } else {
        const auto& p = storygen::pick(storygen::people, rng);
        Referent who = Referent::entity("r:" + storygen::lower(p));
        t.positions_of(who);
        t.current_position(who);
        t.holdings_of(who);
        t.trace();
      }
      auto after = snapshot(t);
      if (after.size() < before.size() || (op >= 2 && after.size() != before.size())) {
        o.fail("item count went from " + std::to_string(before.size()) + " to " + std::to_string(after.size()));
        continue;
      }
      for (std::size_t i = 0; i < before.size(); ++i)
        if (before[i].ls != after[i].ls || before[i].index != after[i].index || before[i].render != after[i].render)
          o.fail("item #" + std::to_string(i + 1) + " changed: " + before[i].render + " -> " + after[i].render);
      for (std::size_t i = 0; i < after.size(); ++i)
        if (after[i].index != i + 1) o.fail("item at " + std::to_string(i) + " has index " + std::to_string(after[i].index));
    }
  }
  return o;
}

// --- (b) answers agree with an independent simulation --------------------

inline Outcome soundness(unsigned seed, std::size_t stories = 1000) {
  Outcome o;
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < stories; ++i) {
    auto s = storygen::random_story(rng, 10);
    ++o.cases;
    for (const auto& v : storygen::check_story(s))
      o.fail(v.story + " | " + v.question + " expected " + v.expected + " got " + v.got);
  }
  return o;
}

// --- (c) every operator combination realizes and parses back -------------

inline std::vector<OperatorSet> operator_grid() {
  std::vector<OperatorSet> out;
  for (Tense tense : {Tense::past, Tense::present, Tense::future})
    for (bool perfect : {false, true})
      for (bool progressive : {false, true})
        for (Voice voice : {Voice::active, Voice::passive})
          for (Polarity pol : {Polarity::positive, Polarity::negative}) {
            OperatorSet ops;
            ops.tense = tense;
            ops.perfect = perfect;
            ops.progressive = progressive;
            ops.voice = voice;
            ops.polarity = pol;
            out.push_back(ops);
          }
  return out;
}

/// Predicates with all five verb forms.
inline std::vector<std::string> complete_verbs() {
  std::vector<std::string> out;
  for (const auto& [id, s] : storygen::lexicon().senses()) {
    if (s.category != Category::predicate) continue;
    try {
      verb_forms(storygen::lexicon(), id);
      out.push_back(id);
    } catch (const GenerationError&) {
    }
  }
  return out;
}

inline bool same_projection(const OperatorSet& a, const OperatorSet& b) {
  return a.tense == b.tense && a.perfect == b.perfect && a.progressive == b.progressive && a.voice == b.voice &&
         a.polarity == b.polarity;
}

inline Outcome verb_grid() {
  Outcome o;
  auto grid = operator_grid();
  for (const auto& verb : complete_verbs()) {
    for (const auto& ops : grid) {
      ++o.cases;
      std::string group;
      try {
        group = realize_verb_group(ops, storygen::lexicon(), verb).str();
        auto back = matcher().operators_of(group);
        if (!same_projection(back, ops)) o.fail(verb + " " + ops.render() + " -> '" + group + "' -> " + back.render());
      } catch (const Error& e) {
        o.fail(verb + " " + ops.render() + " '" + group + "': " + e.what());
      }
    }
  }
  return o;
}

// --- (d) possession is conserved under transfers -------------------------

inline Outcome ledger_conservation(unsigned seed, std::size_t sequences = 300, std::size_t length = 25) {
  Outcome o;
  std::mt19937 rng(seed);
  const auto& objects = storygen::objects;
  for (std::size_t s = 0; s < sequences; ++s) {
    std::map<std::string, std::string> holder;
    Tracker t(storygen::lexicon());
    for (std::size_t k = 0; k < length; ++k) {
      const auto& p = storygen::pick(storygen::people, rng);
      std::vector<std::string> mine, free;
      for (const auto& obj : objects) {
        auto it = holder.find(obj);
        if (it == holder.end()) free.push_back(obj);
        else if (it->second == p) mine.push_back(obj);
      }
      std::string sentence;
      int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      if (kind == 0 && !free.empty()) {
        const auto& obj = storygen::pick(free, rng);
        holder[obj] = p;
        sentence = p + " " + storygen::pick(storygen::gain_verbs, rng) + " the " + obj + ".";
      } else if (kind == 1 && !mine.empty()) {
        const auto& obj = storygen::pick(mine, rng);
        holder.erase(obj);
        sentence = p + " " + storygen::pick(storygen::lose_verbs, rng) + " the " + obj + ".";
      } else if (!mine.empty()) {
        const auto& obj = storygen::pick(mine, rng);
        std::string r = storygen::pick(storygen::people, rng);
        if (r == p) continue;
        holder[obj] = r;
        sentence = p + " " + storygen::pick(storygen::give_verbs, rng) + " the " + obj + " to " + r + ".";
      } else {
        continue;
      }
      t.ingest(matcher().parse_utterance(sentence).front());
      ++o.cases;
      std::size_t total = 0;
      std::set<std::string> seen;
      for (const auto& person : storygen::people) {
        auto ledger = t.holdings_of(Referent::entity("r:" + storygen::lower(person)));
        if (!ledger.diagnostics.empty()) o.fail(sentence + ": " + ledger.diagnostics.front());
        std::set<std::string> got, want;
        for (const auto& h : ledger.held()) {
          got.insert(h.head);
          if (!seen.insert(h.head).second) o.fail(h.head + " is held twice after: " + sentence);
        }
        for (const auto& [obj, who] : holder)
          if (who == person) want.insert(obj);
        if (got != want) o.fail(person + " holds the wrong things after: " + sentence);
        total += got.size();
      }
      if (total != holder.size()) o.fail("held count " + std::to_string(total) + " after: " + sentence);
      if (!t.diagnostics().empty()) o.fail("diagnostic on a consistent story: " + t.diagnostics().front());
    }
  }
  return o;
}

// --- (e) word order matters ----------------------------------------------

inline const std::vector<std::string>& ordered_sentences() {
  static const std::vector<std::string> s = {
      "Mary went to the kitchen.",       "John journeyed to the garden.", "Sandra travelled back to the office.",
      "Daniel moved to the hallway.",    "Fred picked up the milk.",      "Bill dropped the football.",
      "Jeff grabbed the apple there.",   "Mary gave the cake to Fred.",   "Bill handed the milk to Jeff.",
      "Fred passed the football to Mary.", "The wind ate the mountain.",  "The girl started the car.",
      "Mary discarded the newspaper.",   "John got the apple."};
  return s;
}

/// Moves the main verb of `sentence` to every other slot. None of the
/// results may receive a logical structure.
inline Outcome anti_bag_of_words() {
  Outcome o;
  for (const auto& sentence : ordered_sentences()) {
    auto words = tokenize(sentence).words;
    std::size_t verb = words.size();
    for (std::size_t i = 0; i < words.size() && verb == words.size(); ++i)
      for (const auto& l : storygen::lexicon().senses_of(words[i]))
        if (storygen::lexicon().sense(l.sense).category == Category::predicate && l.attrs.count("verbal")) verb = i;
    if (verb == words.size()) {
      o.fail("no verb in: " + sentence);
      continue;
    }
    if (matcher().parse_utterance(sentence).empty()) o.fail("original does not parse: " + sentence);
    for (std::size_t to = 0; to < words.size(); ++to) {
      if (to == verb) continue;
      auto moved = words;
      std::string v = moved[verb];
      moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(verb));
      moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(to), v);
      if (moved == words) continue;
      std::string text = text::join(moved, " ");
      ++o.cases;
      try {
        auto r = matcher().parse_utterance(text);
        o.fail("'" + text + "' parsed as " + r.front().render());
      } catch (const MatchError&) {
      }
    }
  }
  return o;
}

// --- (f) split particles mean the same thing -----------------------------

inline Outcome particle_split() {
  Outcome o;
  for (const auto& p : storygen::people)
    for (const auto& obj : storygen::objects)
      for (const char* tail : {"", " there"})
        for (auto [verb, particle] : {std::pair{"picked", "up"}, std::pair{"put", "down"}}) {
          ++o.cases;
          std::string joined = p + " " + verb + " " + particle + " the " + obj + tail + ".";
          std::string split = p + " " + verb + " the " + obj + " " + particle + tail + ".";
          try {
            auto a = matcher().parse_utterance(joined);
            auto b = matcher().parse_utterance(split);
            if (a.size() != 1 || b.size() != 1 || a[0].render() != b[0].render() ||
                a[0].predicate != b[0].predicate)
              o.fail(joined + " vs " + split);
          } catch (const Error& e) {
            o.fail(joined + " / " + split + ": " + e.what());
          }
        }
  return o;
}

// --- (g) sense selection by argument type, with the part-whole fallback --

inline Outcome wsd() {
  Outcome o;
  auto expect_sense = [&](const std::string& s, const std::string& pred, const std::string& note) {
    ++o.cases;
    try {
      auto r = matcher().parse_utterance(s);
      if (r.size() != 1) return o.fail(s + ": " + std::to_string(r.size()) + " readings");
      if (r[0].predicate != pred) o.fail(s + ": chose " + r[0].predicate);
      std::string got = r[0].notes.empty() ? "" : r[0].notes.front();
      if (got != note) o.fail(s + ": note '" + got + "'");
    } catch (const Error& e) {
      o.fail(s + ": " + e.what());
    }
  };
  expect_sense("The girl ate the sandwich.", "p:eat-chew", "");
  expect_sense("The wind ate the mountain.", "p:eat-erode", "");
  expect_sense("Mary started the car.", "p:start", "car has-a engine");
  ++o.cases;
  try {
    matcher().parse_utterance("The girl ate the mountain.");
    o.fail("girl/mountain received a reading");
  } catch (const MatchError& e) {
    if (e.kind() != "meaningless") o.fail(std::string("girl/mountain failed as ") + e.kind());
  }
  return o;
}

}  // namespace props
