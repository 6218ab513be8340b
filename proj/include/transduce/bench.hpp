#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "transduce/engine.hpp"
#include "transduce/generalize.hpp"
#include "transduce/rulefile.hpp"
#include "transduce/tokens.hpp"

namespace transduce {

/// One benchmark task: examples are fed to the learner in order, held-out
/// pairs decide whether the final rule is correct.
struct TaskFile {
  std::string name;
  TokenizerMode tokenizer = TokenizerMode::symbols();
  std::vector<ExamplePair> examples;
  std::vector<ExamplePair> heldOut;
};

struct TaskResult {
  std::string name;
  bool solved = false;
  int examplesUsed = 0;
  std::string finalState;
  double seconds = 0;
  std::string note;
};

struct BenchReport {
  int tasksTotal = 0;
  int tasksSolved = 0;
  double solveRate = 0;
  double avgExamplesUsed = 0;
  double meanLatency = 0;
  std::vector<TaskResult> tasks;  // sorted by name
};

namespace detail {

inline TokenizerMode tokenizer_from_name(const std::string& s) {
  if (s.empty() || s == "symbols") return TokenizerMode::symbols();
  if (s == "chars") return TokenizerMode::chars();
  if (s.rfind("delimited:", 0) == 0) return TokenizerMode::delimited(s.substr(10));
  throw ParseError("unknown tokenizer '" + s + "'");
}

inline std::vector<ExamplePair> pairs_from(const Json& arr, const TokenizerMode& mode, const char* field) {
  if (!arr.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
  std::vector<ExamplePair> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw ParseError(std::string("entries of '") + field + "' must be [input, output] string pairs");
    out.push_back({tokenize(p[0].get<std::string>(), mode), tokenize(p[1].get<std::string>(), mode)});
  }
  return out;
}

}  // namespace detail

inline TaskFile parse_task(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("task is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw ParseError("task needs a string 'name'");
  TaskFile t;
  t.name = j["name"].get<std::string>();
  t.tokenizer = detail::tokenizer_from_name(j.value("tokenizer", std::string("symbols")));
  t.examples = detail::pairs_from(j.value("examples", Json::array()), t.tokenizer, "examples");
  t.heldOut = detail::pairs_from(j.value("held_out", Json::array()), t.tokenizer, "held_out");
  if (t.examples.empty()) throw ParseError("task '" + t.name + "' has no examples");
  for (const auto& h : t.heldOut)
    if (std::find(t.examples.begin(), t.examples.end(), h) != t.examples.end())
      throw ParseError("task '" + t.name + "' repeats an example in held_out");
  return t;
}

inline std::vector<TaskFile> load_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ParseError("corpus directory not readable: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<TaskFile> tasks;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      tasks.push_back(parse_task(ss.str()));
    } catch (const ParseError& e) {
      throw ParseError(f.filename().string() + ": " + e.what());
    }
  }
  std::sort(tasks.begin(), tasks.end(), [](const TaskFile& a, const TaskFile& b) { return a.name < b.name; });
  return tasks;
}

struct TaskLearning {
  LearnOutcome outcome;
  int examplesUsed = 0;
};

/// Feeds examples one at a time until a length-independent rule is learned
/// or the examples run out.
inline TaskLearning learn_task(const TaskFile& task) {
  TaskLearning tl;
  std::vector<ExamplePair> fed;
  for (const auto& ex : task.examples) {
    fed.push_back(ex);
    try {
      tl.outcome = learn(fed);
    } catch (const Error& e) {
      tl.outcome = LearnOutcome{};
      tl.outcome.reason = e.what();
    }
    if (tl.outcome.learned() && !tl.outcome.lengthRestricted) break;
  }
  tl.examplesUsed = static_cast<int>(fed.size());
  return tl;
}

/// Learns a task and checks every held-out pair against the final rule.
inline TaskResult run_task(const TaskFile& task) {
  TaskResult res;
  res.name = task.name;
  auto start = std::chrono::steady_clock::now();
  auto [outcome, used] = learn_task(task);
  res.examplesUsed = used;
  res.finalState = state_name(outcome.kind);
  if (outcome.learned() && outcome.rule) {
    res.solved = true;
    for (const auto& h : task.heldOut) {
      auto out = apply_rule(*outcome.rule, h.input);
      if (!ok(out) || std::get<TokenSeq>(out) != h.output) {
        res.solved = false;
        res.note = "held-out mismatch on '" + join(h.input, " ") + "'";
        break;
      }
    }
  } else {
    res.note = outcome.reason;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

inline BenchReport run_bench(const std::vector<TaskFile>& tasks) {
  if (tasks.empty()) throw Error("corpus is empty");
  BenchReport rep;
  double total = 0, used = 0;
  for (const auto& t : tasks) {
    auto r = run_task(t);
    rep.tasksSolved += r.solved;
    used += r.examplesUsed;
    total += r.seconds;
    rep.tasks.push_back(std::move(r));
  }
  std::sort(rep.tasks.begin(), rep.tasks.end(),
            [](const TaskResult& a, const TaskResult& b) { return a.name < b.name; });
  rep.tasksTotal = static_cast<int>(tasks.size());
  rep.solveRate = static_cast<double>(rep.tasksSolved) / rep.tasksTotal;
  rep.avgExamplesUsed = used / rep.tasksTotal;
  rep.meanLatency = total / rep.tasksTotal;
  return rep;
}

inline Json report_to_json(const BenchReport& r) {
  Json j;
  j["tasks_total"] = r.tasksTotal;
  j["tasks_solved"] = r.tasksSolved;
  j["solve_rate"] = r.solveRate;
  j["avg_examples_used"] = r.avgExamplesUsed;
  j["mean_latency_s"] = r.meanLatency;
  Json tasks = Json::array();
  for (const auto& t : r.tasks) {
    Json e;
    e["name"] = t.name;
    e["solved"] = t.solved;
    e["examples_used"] = t.examplesUsed;
    e["state"] = t.finalState;
    if (!t.note.empty()) e["note"] = t.note;
    tasks.push_back(std::move(e));
  }
  j["tasks"] = std::move(tasks);
  return j;
}

}  // namespace transduce
