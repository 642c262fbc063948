// Command-line front end: benchmark runs, an interactive session, verb
// group generation and vocabulary checks.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "rrgqa/babi.hpp"

namespace fs = std::filesystem;
using namespace rrgqa;

namespace {

std::string data_dir() {
#ifdef RRGQA_DATA_DIR
  return RRGQA_DATA_DIR;
#else
  return "data";
#endif
}

std::string lexicon_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RRGQA_LEXICON"); env && *env) return env;
  return data_dir() + "/lexicon";
}

struct Options {
  std::string lexicon;
  std::string data;
  bool fixtures = false;
  int task = 0;
  std::string split = "both";
  std::string mode;
  bool babi_last = true;
  bool strict_take = false;
  bool strict_receive = false;
  bool include_current = true;
  std::string polar = "short";
  std::string out;
  double threshold = 0.0;
  unsigned threads = 1;
  bool verbose = false;
  std::string pred;
  std::string ops;
  std::string lang = "en";
  std::string csv;
  std::vector<std::string> files;
};

PolarStyle polar_style(const std::string& s) {
  if (s == "bare") return PolarStyle::bare;
  if (s == "full") return PolarStyle::full;
  return PolarStyle::short_form;
}

RealizationOptions realization(const Options& o, AnswerMode fallback) {
  AnswerMode mode = o.mode.empty() ? fallback : o.mode == "natural" ? AnswerMode::natural : AnswerMode::keyword;
  return {mode, polar_style(o.polar)};
}

/// Task files to run: the bundled fixture, or every split of the task found
/// under --data (a file path is taken as is).
std::vector<std::pair<std::string, std::string>> task_files(const Options& o) {
  std::vector<std::pair<std::string, std::string>> out;
  if (o.fixtures) {
    out.emplace_back("fixture", data_dir() + "/fixtures/qa" + std::to_string(o.task) + ".txt");
    return out;
  }
  if (fs::is_regular_file(o.data)) {
    out.emplace_back(fs::path(o.data).filename().string(), o.data);
    return out;
  }
  if (!fs::is_directory(o.data)) throw Error("io", "no such file or directory: " + o.data);
  const std::string prefix = "qa" + std::to_string(o.task) + "_";
  for (const char* split : {"train", "test"}) {
    if (o.split != "both" && o.split != split) continue;
    for (const auto& entry : fs::directory_iterator(o.data)) {
      auto name = entry.path().filename().string();
      if (text::starts_with(name, prefix) && name.size() > 4 &&
          name.compare(name.size() - std::string(split).size() - 4, std::string::npos, std::string(split) + ".txt") == 0)
        out.emplace_back(split, entry.path().string());
    }
  }
  if (out.empty()) throw Error("io", "no qa" + std::to_string(o.task) + " files under " + o.data);
  return out;
}

std::string percent(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << v << "%";
  return s.str();
}

void print_score(const std::string& label, const Score& s) {
  if (s.empty()) {
    std::cout << label << ": no questions\n";
    return;
  }
  std::cout << label << ": strict " << percent(s.strict()) << " (" << s.passed << "/" << s.total << "), audited "
            << percent(s.audited()) << ", gigo " << s.gigo << ", failed " << s.failed << "\n";
}

int cmd_run(const Options& o) {
  if (o.task <= 0) throw Error("usage", "run needs --task");
  if (!o.fixtures && o.data.empty()) throw Error("usage", "run needs --data or --fixtures");
  auto lex = load_lexicon_dir(lexicon_dir(o.lexicon));
  TaskConfig cfg;
  cfg.babi_last = o.babi_last;
  cfg.strict_take = o.strict_take;
  cfg.strict_receive = o.strict_receive;
  cfg.include_current_position = o.include_current;
  cfg.realization = realization(o, AnswerMode::keyword);
  cfg.threads = o.threads;

  bool ok = true;
  std::vector<RunResult> all;
  for (const auto& [label, path] : task_files(o)) {
    auto start = std::chrono::steady_clock::now();
    auto results = run_task(lex, parse_babi(read_file(path)), cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : results) {
      if (r.status == Status::passed && !o.verbose) continue;
      std::cout << "story " << r.story_id << " line " << r.line_id << " [" << to_string(r.status) << "] " << r.question
                << " expected '" << r.expected << "' got '" << r.produced << "'";
      if (!r.rule.empty()) std::cout << " (" << r.rule << ": " << r.explanation << ")";
      std::cout << "\n";
      if (r.status == Status::failed) std::cout << r.trace;
    }
    auto s = score(results);
    print_score("task " + std::to_string(o.task) + " " + label, s);
    std::cout << "  " << std::fixed << std::setprecision(3) << secs << " s\n";
    if (!s.empty() && s.strict() + 1e-9 < o.threshold) ok = false;
    all.insert(all.end(), results.begin(), results.end());
  }
  std::string out = o.out.empty() ? "rrgqa_task" + std::to_string(o.task) + ".csv" : o.out;
  export_csv(all, out);
  std::cout << "wrote " << out << "\n";
  return ok ? 0 : 1;
}

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> csv_record(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else out.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

int cmd_score(const Options& o) {
  if (o.csv.empty()) throw Error("usage", "score needs a CSV file");
  std::istringstream in(read_file(o.csv));
  std::string line;
  std::getline(in, line);
  if (text::trim(line) != "story_id,input,expected,answer,status") throw Error("format", o.csv + " is not a results file");
  std::vector<RunResult> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    auto f = csv_record(line);
    if (f.size() != 5) throw ParseError(n, "expected 5 fields");
    RunResult r;
    r.expected = f[2];
    r.produced = f[3];
    if (f[4] == "passed") r.status = Status::passed;
    else if (f[4] == "gigo") r.status = Status::gigo;
    else if (f[4] == "failed") r.status = Status::failed;
    else throw ParseError(n, "unknown status '" + f[4] + "'");
    rows.push_back(std::move(r));
  }
  print_score(o.csv, score(rows));
  return 0;
}

int cmd_repl(const Options& o) {
  auto lex = load_lexicon_dir(lexicon_dir(o.lexicon));
  Matcher matcher(lex, MatcherConfig{o.strict_take});
  TrackerConfig tc{o.include_current, false, o.strict_receive};
  Tracker tracker(lex, tc);
  auto opts = realization(o, AnswerMode::natural);
  std::string line;
  bool interactive = isatty(0);
  if (interactive) std::cout << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    auto input = std::string(text::trim(line));
    if (input == ":quit" || input == ":q") break;
    if (input == ":trace") std::cout << tracker.trace();
    else if (input == ":reset") tracker = Tracker(lex, tc);
    else if (!input.empty()) {
      try {
        auto props = matcher.parse_utterance(input);
        const auto& p = props.front();
        if (p.operators.question()) {
          std::string a = text::capitalize(realize_answer(tracker.answer_question(p), opts));
          if (!a.empty() && a.back() != '.' && a.back() != '?') a += '.';
          std::cout << a << "\n";
        } else {
          tracker.ingest(p);
          if (o.verbose) std::cout << tracker.items().back().render() << "\n";
        }
      } catch (const Error& e) {
        std::cout << "error (" << e.kind() << "): " << e.what() << "\n";
      }
    }
    if (interactive) std::cout << "> " << std::flush;
  }
  return 0;
}

int cmd_generate(const Options& o) {
  if (o.pred.empty()) throw Error("usage", "generate needs --pred");
  auto ops = parse_operators(o.ops);
  if (o.lang == "fr") {
    std::cout << realize_verb_group_fr(ops, o.pred) << "\n";
    return 0;
  }
  auto lex = load_lexicon_dir(lexicon_dir(o.lexicon));
  std::string sense = text::starts_with(o.pred, "p:") ? o.pred : "p:" + o.pred;
  std::cout << realize_verb_group(ops, lex, sense).str() << "\n";
  return 0;
}

int cmd_lexicon_check(const Options& o) {
  auto lex = load_lexicon_dir(lexicon_dir(o.lexicon));
  Matcher matcher(lex);
  std::vector<std::string> paths = o.files;
  if (paths.empty()) {
    if (o.task <= 0) throw Error("usage", "lexicon-check needs files or --task");
    for (const auto& [label, path] : task_files(o)) paths.push_back(path);
  }
  bool clean = true;
  for (const auto& path : paths) {
    auto gaps = vocabulary_gaps(matcher, parse_babi(read_file(path)));
    if (gaps.empty()) {
      std::cout << path << ": all words known\n";
      continue;
    }
    clean = false;
    std::cout << path << ": " << gaps.size() << " missing\n";
    for (const auto& w : gaps) std::cout << "  " << w << "\n";
  }
  return clean ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meaning-based question answering over bAbI-style stories"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--lexicon", o.lexicon, "Lexicon directory (default: $RRGQA_LEXICON, then the bundled data)");

  auto add_task = [&](CLI::App* c) {
    c->add_option("--task", o.task, "bAbI task number");
    c->add_option("--data", o.data, "Task file, or a directory holding qa<N>_*_{train,test}.txt");
    c->add_flag("--fixtures", o.fixtures, "Use the bundled fixture for the task");
    c->add_option("--split", o.split, "train, test or both")->check(CLI::IsMember({"train", "test", "both"}));
  };
  auto add_engine = [&](CLI::App* c) {
    c->add_option("--mode", o.mode, "Answer mode")->check(CLI::IsMember({"keyword", "natural"}));
    c->add_flag("--strict-take", o.strict_take, "'took X there' means carried, not acquired");
    c->add_flag("--strict-receive", o.strict_receive, "'received' needs a giver");
    c->add_flag("--include-current-position,!--no-include-current-position", o.include_current,
                "Past-tense where lists include the current place (default on)");
    c->add_option("--polar-style", o.polar, "bare, short or full")->check(CLI::IsMember({"bare", "short", "full"}));
  };

  auto* run = app.add_subcommand("run", "Run and score a task");
  add_task(run);
  add_engine(run);
  run->add_flag("--babi-last,!--no-babi-last", o.babi_last, "Content answers keep only the latest match (default on)");
  run->add_option("--out", o.out, "CSV output path");
  run->add_option("--threshold", o.threshold, "Minimum strict accuracy in percent for exit status 0");
  run->add_option("--threads", o.threads, "Stories processed in parallel");
  run->add_flag("-v,--verbose", o.verbose, "Print passed questions too");

  auto* sc = app.add_subcommand("score", "Summarize a results CSV");
  sc->add_option("csv", o.csv, "Results file")->required();

  auto* repl = app.add_subcommand("repl", "Interactive session (:trace, :reset, :quit)");
  add_engine(repl);
  repl->add_flag("-v,--verbose", o.verbose, "Echo each stored context item");

  auto* gen = app.add_subcommand("generate", "Realize a verb group");
  gen->add_option("--pred", o.pred, "Predicate (English sense, or French infinitive)")->required();
  gen->add_option("--ops", o.ops, "Comma-separated operators");
  gen->add_option("--lang", o.lang, "en or fr")->check(CLI::IsMember({"en", "fr"}));

  auto* check = app.add_subcommand("lexicon-check", "List words a task file uses that the lexicon lacks");
  add_task(check);
  check->add_option("files", o.files, "bAbI files");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(o);
    if (*sc) return cmd_score(o);
    if (*repl) return cmd_repl(o);
    if (*gen) return cmd_generate(o);
    if (*check) return cmd_lexicon_check(o);
  } catch (const Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
