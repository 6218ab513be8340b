#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "transduce/bench.hpp"
#include "transduce/engine.hpp"
#include "transduce/generalize.hpp"
#include "transduce/rulefile.hpp"
#include "transduce/service.hpp"
#include "transduce/tokens.hpp"

using namespace transduce;

namespace {

enum Exit { kOk = 0, kFalse = 1, kParse = 2, kNeedLonger = 3, kNeedDifferent = 4, kUnlearnable = 5, kNoOutput = 6 };

struct Modes {
  bool raw = false;
  std::string tokenizer = "symbols";

  TokenizerMode mode() const {
    if (!raw) return TokenizerMode::delimited(" ");
    return tokenizer == "chars" ? TokenizerMode::chars() : TokenizerMode::symbols();
  }
  std::string render(const TokenSeq& t) const {
    return raw && tokenizer == "chars" ? join(t, "") : join(t, " ");
  }
};

int exit_for(LearnOutcome::Kind k) {
  switch (k) {
    case LearnOutcome::Kind::Learned: return kOk;
    case LearnOutcome::Kind::NeedLongerExample: return kNeedLonger;
    case LearnOutcome::Kind::NeedDifferentLengthExample: return kNeedDifferent;
    case LearnOutcome::Kind::Unlearnable: return kUnlearnable;
  }
  return kUnlearnable;
}

std::string banner(LearnOutcome::Kind k) {
  switch (k) {
    case LearnOutcome::Kind::Learned: return "LEARNED";
    case LearnOutcome::Kind::NeedLongerExample: return "NEED LONGER";
    case LearnOutcome::Kind::NeedDifferentLengthExample: return "NEED DIFFERENT LENGTH";
    case LearnOutcome::Kind::Unlearnable: return "UNLEARNABLE";
  }
  return {};
}

std::string request_text(const LearnOutcome& o) {
  switch (o.kind) {
    case LearnOutcome::Kind::NeedLongerExample: return "please give a longer example";
    case LearnOutcome::Kind::NeedDifferentLengthExample:
      return "please give a second example of a different length";
    default: return o.reason;
  }
}

ExamplePair parse_line(const std::string& line, const Modes& m) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) throw ParseError("expected input<TAB>output");
  auto in = tokenize(line.substr(0, tab), m.mode());
  auto out = tokenize(line.substr(tab + 1), m.mode());
  if (in.empty() || out.empty()) throw ParseError("empty side in example line");
  return {in, out};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_rule(const TransductionRule& r, std::ostream& os) {
  os << describe(r) << "\n";
  if (r.lengthRestricted) os << "(valid only at the training lengths)\n";
}

int cmd_learn(const std::string& examplesPath, const std::string& rulePath, const Modes& m) {
  std::vector<ExamplePair> examples;
  try {
    std::istringstream in(read_file(examplesPath));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      try {
        examples.push_back(parse_line(line, m));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(n) + ": " + e.what());
      }
    }
    if (examples.empty()) throw ParseError("no examples in " + examplesPath);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }

  LearnOutcome o;
  try {
    o = learn(examples);
  } catch (const InputTooShort& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  for (const auto& w : o.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << banner(o.kind) << "\n";
  if (!o.learned()) {
    std::cout << request_text(o) << "\n";
    return exit_for(o.kind);
  }
  print_rule(*o.rule, std::cout);
  std::ofstream out(rulePath, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << rulePath << "\n";
    return kParse;
  }
  out << serialize_rule(*o.rule);
  return kOk;
}

int cmd_apply(const std::string& rulePath, const std::string& input, const Modes& m) {
  TransductionRule rule;
  try {
    rule = parse_rule(read_file(rulePath));
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  auto out = apply_rule(rule, tokenize(input, m.mode()));
  if (ok(out)) {
    std::cout << m.render(std::get<TokenSeq>(out)) << "\n";
    return kOk;
  }
  const auto& err = error_of(out);
  switch (err.kind) {
    case ExecError::Kind::GuardFailure:
      std::cout << "FALSE\n";
      std::cerr << err.message() << "\n";
      return kFalse;
    case ExecError::Kind::TooShort:
    case ExecError::Kind::AmbiguousAtLength:
      std::cerr << "error: " << err.message() << "\n";
      return kNoOutput;
    case ExecError::Kind::Internal: break;
  }
  std::cerr << "error: " << err.message() << "\n";
  return kParse;
}

int cmd_repl(const Modes& m, std::istream& in, std::ostream& out) {
  std::vector<ExamplePair> examples;
  LearnOutcome state = learn({});
  std::string line;
  out << "enter examples as input<TAB>output; ?input applies; :save PATH; :reset; :quit\n";
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == ":quit" || line == ":q") break;
    if (line == ":reset") {
      examples.clear();
      state = learn({});
      out << "cleared\n";
      continue;
    }
    if (line.rfind(":save", 0) == 0) {
      auto path = line.size() > 6 ? line.substr(6) : std::string{};
      if (path.empty()) out << "error: usage :save PATH\n";
      else if (!state.learned()) out << "error: nothing learned yet\n";
      else {
        std::ofstream f(path, std::ios::binary);
        if (f << serialize_rule(*state.rule)) out << "saved " << path << "\n";
        else out << "error: cannot write " << path << "\n";
      }
      continue;
    }
    if (line[0] == '?') {
      if (!state.learned()) {
        out << "error: no rule learned yet\n";
        continue;
      }
      auto r = apply_rule(*state.rule, tokenize(line.substr(1), m.mode()));
      if (ok(r)) out << m.render(std::get<TokenSeq>(r)) << "\n";
      else if (error_of(r).kind == ExecError::Kind::GuardFailure) out << "FALSE (" << error_of(r).message() << ")\n";
      else out << "error: " << error_of(r).message() << "\n";
      continue;
    }
    try {
      auto pair = parse_line(line, m);
      auto next = examples;
      next.push_back(pair);
      state = learn(next);
      examples = std::move(next);
    } catch (const Error& e) {
      out << "error: " << e.what() << "\n";
      continue;
    }
    for (const auto& w : state.warnings) out << "warning: " << w << "\n";
    out << banner(state.kind) << "\n";
    if (state.learned()) print_rule(*state.rule, out);
    else out << request_text(state) << "\n";
  }
  return kOk;
}

int cmd_bench(const std::string& corpus, const std::string& reportPath) {
  BenchReport rep;
  try {
    rep = run_bench(load_corpus(corpus));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  for (const auto& t : rep.tasks)
    std::cout << (t.solved ? "ok   " : "FAIL ") << t.name << " (" << t.examplesUsed << " ex, " << t.finalState
              << ")" << (t.note.empty() ? "" : " " + t.note) << "\n";
  std::cout << "solved " << rep.tasksSolved << "/" << rep.tasksTotal << " rate=" << rep.solveRate
            << " avg_examples=" << rep.avgExamplesUsed << " mean_latency_s=" << rep.meanLatency << "\n";
  if (!reportPath.empty()) {
    std::ofstream out(reportPath, std::ios::binary);
    out << report_to_json(rep).dump(2) << "\n";
  }
  return kOk;
}

int cmd_serve(const std::string& host, int port, const std::string& dir) {
  SessionStore store(dir);
  httplib::Server server;
  bind_routes(server, store);
  std::cout << "listening on http://" << host << ":" << port << "/api/v1" << std::endl;
  return server.listen(host, port) ? kOk : kParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn positional token transformations from examples"};
  app.require_subcommand(1);
  Modes modes;
  auto addModes = [&](CLI::App* sub) {
    sub->add_flag("--raw", modes.raw, "tokenize raw strings instead of splitting on spaces");
    sub->add_option("--tokenizer", modes.tokenizer, "raw tokenizer")->check(CLI::IsMember({"symbols", "chars"}));
  };

  std::string examplesPath, rulePath, input, corpus, reportPath, host = "127.0.0.1", dir;
  int port = 8080;

  auto* learnCmd = app.add_subcommand("learn", "learn a rule from an examples file");
  learnCmd->add_option("EXAMPLES", examplesPath, "file of input<TAB>output lines")->required();
  learnCmd->add_option("--rule", rulePath, "where to write the rule")->required();
  addModes(learnCmd);

  auto* applyCmd = app.add_subcommand("apply", "apply a saved rule to one input");
  applyCmd->add_option("--rule", rulePath, "rule file")->required();
  applyCmd->add_option("INPUT", input, "input tokens")->required();
  addModes(applyCmd);

  auto* replCmd = app.add_subcommand("repl", "interactive learning session");
  addModes(replCmd);

  auto* benchCmd = app.add_subcommand("bench", "run the benchmark corpus");
  benchCmd->add_option("CORPUS", corpus, "directory of task files")->required();
  benchCmd->add_option("--report", reportPath, "where to write the JSON report");

  auto* serveCmd = app.add_subcommand("serve", "run the HTTP service");
  serveCmd->add_option("--host", host);
  serveCmd->add_option("--port", port);
  serveCmd->add_option("--store", dir, "directory for persisted sessions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  if (*learnCmd) return cmd_learn(examplesPath, rulePath, modes);
  if (*applyCmd) return cmd_apply(rulePath, input, modes);
  if (*replCmd) return cmd_repl(modes, std::cin, std::cout);
  if (*benchCmd) return cmd_bench(corpus, reportPath);
  if (*serveCmd) return cmd_serve(host, port, dir);
  return kParse;
}
