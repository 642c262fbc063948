// Acceptance run: one PASS/FAIL/NOT RUN line per criterion. Exits nonzero
// only when something fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "properties.hpp"

using namespace rrgqa;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, not_run };

struct Line {
  std::string id;
  Verdict verdict;
  std::string detail;
};

std::vector<Line> lines;

void report(std::string id, Verdict v, std::string detail) {
  const char* tag = v == Verdict::pass ? "PASS" : v == Verdict::fail ? "FAIL" : "NOT RUN";
  std::cout << tag << "  " << id << "  " << detail << std::endl;
  lines.push_back({std::move(id), v, std::move(detail)});
}

void report(std::string id, const props::Outcome& o, const std::string& what) {
  std::string detail = what + ", " + std::to_string(o.cases) + " cases";
  if (!o.ok()) detail += ", " + std::to_string(o.failures.size()) + " violations: " + (o.failures.empty() ? "" : o.failures.front());
  report(std::move(id), o.ok() ? Verdict::pass : Verdict::fail, detail);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<Story> fixture(const std::string& name) {
  return parse_babi(read_file(storygen::data_dir() + "/fixtures/" + name));
}

const int kExactTasks[] = {1, 6, 7, 8, 9, 11, 12, 13};

// --- 1 ---------------------------------------------------------------------

void fixtures() {
  auto start = std::chrono::steady_clock::now();
  auto lex = load_lexicon_dir(storygen::data_dir() + "/lexicon");
  std::vector<std::string> problems;
  std::size_t questions = 0;
  for (int task : kExactTasks) {
    auto rs = run_task(lex, fixture("qa" + std::to_string(task) + ".txt"));
    questions += rs.size();
    auto s = score(rs);
    if (s.empty() || s.passed != s.total)
      problems.push_back("qa" + std::to_string(task) + " " + std::to_string(s.passed) + "/" + std::to_string(s.total));
  }

  auto rs = run_task(lex, fixture("qa5.txt"));
  questions += rs.size();
  double secs = seconds_since(start);
  // The known mismatches, keyed by fixture story and line.
  struct Expect {
    std::size_t story, line;
    const char *expected, *produced, *rule;
  };
  const Expect known[] = {{2, 14, "apple", "football", "G1"},
                          {2, 17, "apple", "football", "G1"},
                          {4, 31, "milk", "football", "G1"},
                          {5, 11, "Mary", "bill", "G2"}};
  for (const auto& r : rs) {
    if (r.status == Status::passed) continue;
    bool listed = false;
    for (const auto& k : known)
      listed |= r.story_id == k.story && r.line_id == k.line && r.expected == k.expected &&
                r.produced == k.produced && r.rule == k.rule && r.status == Status::gigo;
    if (!listed)
      problems.push_back("qa5 story " + std::to_string(r.story_id) + " line " + std::to_string(r.line_id) + " got '" +
                         r.produced + "' (" + to_string(r.status) + ")");
  }
  auto s5 = score(rs);
  if (s5.gigo != std::size(known)) problems.push_back("qa5 gigo " + std::to_string(s5.gigo));
  if (secs >= 1.0) problems.push_back("took " + std::to_string(secs) + " s");

  std::ostringstream d;
  d << "fixtures for tasks 1,6,7,8,9,11,12,13 exact; qa5 mismatches G1 x3, G2 x1; " << questions << " questions in "
    << std::fixed << std::setprecision(3) << secs << " s";
  for (const auto& p : problems) d << "; " << p;
  report("1", problems.empty() ? Verdict::pass : Verdict::fail, d.str());
}

// --- 2 ---------------------------------------------------------------------

/// The qa<N>_*_<split>.txt files of a task under `dir`.
std::vector<Story> task_stories(const std::string& dir, int task, const std::string& split) {
  std::vector<Story> out;
  const std::string prefix = "qa" + std::to_string(task) + "_";
  const std::string suffix = "_" + split + ".txt";
  for (const auto& e : fs::directory_iterator(dir)) {
    auto name = e.path().filename().string();
    if (!text::starts_with(name, prefix) || name.size() < suffix.size() ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
      continue;
    auto more = parse_babi(read_file(e.path().string()));
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

// Splits are scored separately. The task-5 bound is known for training data
// only, so its test split is reported but not gated.
void full_dataset() {
  const char* dir = std::getenv("BABI_DIR");
  if (!dir || !*dir) {
    report("2", Verdict::not_run, "set BABI_DIR to a bAbI en-10k directory to run the full tasks");
    return;
  }
  auto lex = load_lexicon_dir(storygen::data_dir() + "/lexicon");
  std::vector<std::string> problems;
  std::ostringstream d;
  d << std::fixed << std::setprecision(2);
  std::vector<int> tasks(std::begin(kExactTasks), std::end(kExactTasks));
  tasks.push_back(5);
  for (int task : tasks) {
    bool any = false;
    for (const char* split : {"train", "test"}) {
      const std::string name = "qa" + std::to_string(task) + " " + split;
      try {
        auto stories = task_stories(dir, task, split);
        if (stories.empty()) continue;
        any = true;
        auto start = std::chrono::steady_clock::now();
        auto s = score(run_task(lex, stories));
        double secs = seconds_since(start);
        d << name << " " << s.strict() << "% strict, " << s.audited() << "% audited, " << secs << " s; ";
        bool ok = s.passed == s.total;
        if (task == 5) ok = std::string(split) == "test" || (s.strict() >= 99.4 && s.failed == 0);
        if (!ok || secs >= 60.0) problems.push_back(name);
      } catch (const Error& e) {
        problems.push_back(name + ": " + e.what());
      }
    }
    if (!any) problems.push_back("no files for qa" + std::to_string(task));
  }
  for (const auto& p : problems) d << "off: " << p << "; ";
  report("2", problems.empty() ? Verdict::pass : Verdict::fail, d.str());
}

// --- 3 ---------------------------------------------------------------------

NounPhrase noun(const Lexicon& lex, const char* sense, const char* attrs) {
  NounPhrase np{*lex.form_with(sense, {"singular"}), *lex.form_with(sense, {"plural"})};
  auto ops = parse_operators(attrs);
  np.definite = ops.definite;
  np.number = ops.number;
  np.deixis = ops.deixis;
  return np;
}

void nlg_goldens() {
  const auto& lex = storygen::lexicon();
  struct Row {
    const char *actor, *undergoer, *ops, *expected;
  };
  const Row rows[] = {
      {"definite", "", "past", "The cat ate a rat"},
      {"", "", "present", "A cat eats a rat"},
      {"", "", "present,negative", "A cat doesn't eat a rat"},
      {"", "", "present,statement,negative,passive,perfect,progressive", "A rat hasn't been being eaten by a cat"},
      {"definite,singular,proximal", "definite,plural,distal", "present,statement,negative,passive,perfect,progressive",
       "Those rats haven't been being eaten by this cat"},
      {"definite,singular,proximal", "definite,plural,distal", "future,question,negative,passive,perfect,progressive",
       "Won't those rats have been being eaten by this cat?"},
      {"", "", "present,negative,passive,question", "Isn't a rat eaten by a cat?"},
  };
  std::vector<std::string> off;
  std::size_t n = 0;
  try {
    auto eat = verb_forms(lex, "p:eat-chew");
    for (const auto& r : rows) {
      ++n;
      auto got = realize_clause(noun(lex, "r:cat", r.actor), noun(lex, "r:rat", r.undergoer), eat, parse_operators(r.ops));
      if (got != r.expected) off.push_back("'" + got + "'");
    }
    ++n;
    auto speak = realize_verb_group(parse_operators("future,passive,perfect,progressive,negative"), lex, "p:speak").str();
    if (speak != "won't have been being spoken") off.push_back("'" + speak + "'");
    const char* cells[] = {"1sg", "2sg", "3sg", "1pl", "2pl", "3pl"};
    const char* futures[] = {"parlerai", "parleras", "parlera", "parlerons", "parlerez", "parleront"};
    for (int i = 0; i < 6; ++i) {
      ++n;
      auto got = realize_verb_group_fr(parse_operators(std::string("future,") + cells[i]), "parler");
      if (got != futures[i]) off.push_back("'" + got + "'");
    }
  } catch (const Error& e) {
    off.push_back(e.what());
  }
  std::string d = std::to_string(n) + " outputs (7 clauses, 1 verb group, 6 French futures)";
  for (const auto& o : off) d += "; got " + o;
  report("3", off.empty() ? Verdict::pass : Verdict::fail, d);
}

// --- 5 ---------------------------------------------------------------------

void embedded() {
  const auto& lex = storygen::lexicon();
  auto stories = fixture("embedded.txt");
  TaskConfig cfg;
  cfg.realization.mode = AnswerMode::natural;
  auto with = run_task(lex, stories, cfg);
  cfg.include_current_position = false;
  auto without = run_task(lex, stories, cfg);
  bool ok = with.size() == 2 && without.size() == 2 && with[0].produced == "in the garden" &&
            with[1].produced.find("in the kitchen") != std::string::npos && without[1].produced == "in the kitchen";
  std::string d = "present '" + (with.empty() ? "" : with[0].produced) + "', past '" +
                  (with.size() < 2 ? "" : with[1].produced) + "', past without current '" +
                  (without.size() < 2 ? "" : without[1].produced) + "'";
  report("5", ok ? Verdict::pass : Verdict::fail, d);
}

template <class F>
void guarded(const char* id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, Verdict::fail, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded("1", fixtures);
  guarded("2", full_dataset);
  guarded("3", nlg_goldens);
  guarded("4a", [] { report("4a", props::append_only(101), "context append-only"); });
  guarded("4b", [] { report("4b", props::soundness(202, 1000), "answers match simulation on random 10-sentence stories"); });
  guarded("4c", [] { report("4c", props::verb_grid(), "48 operator combinations realize and parse back"); });
  guarded("4d", [] { report("4d", props::ledger_conservation(303), "possession conserved"); });
  guarded("4e", [] { report("4e", props::anti_bag_of_words(), "moved verbs get no reading"); });
  guarded("4f", [] { report("4f", props::particle_split(), "split particles equivalent"); });
  guarded("4g", [] { report("4g", props::wsd(), "sense trio and qualia fallback"); });
  guarded("5", embedded);
  bool failed = false;
  for (const auto& l : lines) failed |= l.verdict == Verdict::fail;
  return failed ? 1 : 0;
}
