// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <cstdio>
#include <iostream>

#include "support.hpp"

using namespace transduce;
using support::words;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& what) {
  std::printf("%s %-10s %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str());
  std::fflush(stdout);
  failures += !pass;
}

TokenSeq run_ok(const TransductionRule& r, const TokenSeq& in) {
  auto out = apply_rule(r, in);
  return ok(out) ? std::get<TokenSeq>(out) : TokenSeq{"<" + error_of(out).message() + ">"};
}

bool criterion1() {
  auto o = learn({{words("a b c d e"), words("e d c b a")}});
  if (!o.learned() || !o.rule) return false;
  auto enc = encode(abstract_pair({words("a b c d e"), words("e d c b a")}), 5);
  return enc.seq1 == std::vector<int>{2, 2, 2, 2, 0, -2, -2} && formula(o.rule->seq1) == "(L-1)*[2],0,(L-3)*[-2]" &&
         run_ok(*o.rule, words("a b c d e f")) == words("f e d c b a") &&
         run_ok(*o.rule, words("1 2 3 4 5 6")) == words("6 5 4 3 2 1");
}

bool criterion2() {
  auto o = learn({{words("a b c d"), words("a b e c d")}});
  return o.rule && run_ok(*o.rule, words("1 2 3 4")) == words("1 2 e 3 4");
}

bool criterion3() {
  auto o = learn({{words("a b c d"), words("a b c")}});
  return o.learned() && run_ok(*o.rule, words("1 2 3 4")) == words("1 2 3");
}

bool criterion4() {
  auto o = learn({{words("john . doe @ gmail . com"), words("firstname : john ; surname : doe")},
                  {words("mary . jane @ hotmail . fr"), words("firstname : mary ; surname : jane")}});
  if (!o.learned()) return false;
  auto bad = apply_rule(*o.rule, words("francis dot frydman at hotmail dot com"));
  return run_ok(*o.rule, words("francis . frydman @ hotmail . com")) == words("firstname : francis ; surname : frydman") &&
         !ok(bad) && error_of(bad).kind == ExecError::Kind::GuardFailure;
}

bool criterion5() {
  ExamplePair first{words("x y z t u v w"), words("x y z ; t u v w")};
  ExamplePair second{words("a b c d e f g h"), words("a b c ; d e f g h")};
  if (learn({first}).kind != LearnOutcome::Kind::NeedDifferentLengthExample) return false;
  auto o = learn({first, second});
  auto in = support::distinct(10);
  return o.learned() && !o.lengthRestricted && run_ok(*o.rule, in) == support::insert_at(in, 3, ";");
}

bool criterion6() { return learn({{words("a b c"), words("c b a")}}).kind == LearnOutcome::Kind::NeedLongerExample; }

void property(const std::string& id, const std::string& what, const std::function<support::Check()>& f) {
  support::Check c;
  double s = support::seconds_of([&] { c = f(); });
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s (%ld cases, %.2f s)", what.c_str(), c.cases, s);
  report(id, c.ok && s < 30.0, std::string(buf) + (c.ok ? "" : ": " + c.detail));
}

}  // namespace

int main() {
  double total = support::seconds_of([] {
    struct Worked {
      const char* id;
      const char* what;
      bool (*fn)();
    };
    const Worked worked[] = {
        {"1", "reverse-5 seq1 and generalization, applied at L=6", criterion1},
        {"2", "insert_e maps [1,2,3,4] to [1,2,e,3,4]", criterion2},
        {"3", "droplast maps [1,2,3,4] to [1,2,3]", criterion3},
        {"4", "extract output and guard failure", criterion4},
        {"5", "need-different-length, then insert after position 3", criterion5},
        {"6", "reverse-3 needs a longer example", criterion6},
    };
    double workedTime = 0;
    for (const auto& w : worked) {
      bool pass = false;
      workedTime += support::seconds_of([&] { pass = w.fn(); });
      report(w.id, pass, w.what);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worked examples total %.3f s (limit 1 s)", workedTime);
    report("1-6/time", workedTime < 1.0, buf);

    auto rules = support::corpus_rules();
    property("7", "codec round trip on random tasks, L0 <= 8", [] { return support::codec_round_trip(); });
    property("8", "execute agrees with brute-force oracle, L <= 6", [&] { return support::oracle_equivalence(rules); });
    property("9", "conservation and length law, minLen..minLen+5", [&] { return support::conservation_and_length(rules); });
    property("10", "byte-identical rule files across runs", [] { return support::determinism(); });

    BenchReport rep;
    double benchTime = support::seconds_of([&] { rep = run_bench(support::corpus()); });
    char b[200];
    std::snprintf(b, sizeof b, "tasks=%d solved=%d rate=%.3f avg_examples=%.2f mean_latency=%.5f s (%.2f s)",
                  rep.tasksTotal, rep.tasksSolved, rep.solveRate, rep.avgExamplesUsed, rep.meanLatency, benchTime);
    report("bench", rep.tasksTotal >= 40 && rep.solveRate >= 0.85 && rep.avgExamplesUsed <= 2.0 && rep.meanLatency <= 0.05,
           b);
  });
  char buf[96];
  std::snprintf(buf, sizeof buf, "acceptance suite %.2f s (limit 120 s)", total);
  report("suite/time", total < 120.0, buf);
  return failures == 0 ? 0 : 1;
}
