#pragma once

// Oracles, generators and property checks shared by the gtest suites and the
// acceptance runner. Nothing here calls the code under test to compute an
// expected value.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "transduce/bench.hpp"
#include "transduce/engine.hpp"
#include "transduce/generalize.hpp"
#include "transduce/rulefile.hpp"

#ifndef TRANSDUCE_CORPUS_DIR
#define TRANSDUCE_CORPUS_DIR "corpus"
#endif

namespace support {

using namespace transduce;

inline TokenSeq words(const char* s) { return split_words(s); }

inline TokenSeq distinct(int n, const std::string& prefix = "t") {
  TokenSeq out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Reference transformations.
inline TokenSeq reversed(TokenSeq s) {
  std::reverse(s.begin(), s.end());
  return s;
}
inline TokenSeq insert_at(TokenSeq s, std::size_t pos, const Token& t) {
  s.insert(s.begin() + static_cast<long>(pos), t);
  return s;
}

// ---------------------------------------------------------------------------
// Clause oracle: a direct transcription of the chain-splitting definition for
// one example, written without the library's walker or abstraction code.

struct NaiveLiteral {
  char chain;  // 'I' or 'O'
  int arg1;
  std::string arg2;  // "X<n>", "'tok'" or "_"
  int arg3;
  bool operator==(const NaiveLiteral&) const = default;
};

inline std::vector<NaiveLiteral> naive_clause(const ExamplePair& p) {
  auto in_set = [](const TokenSeq& s, const Token& t) { return std::find(s.begin(), s.end(), t) != s.end(); };
  std::set<TokenSeq> memo{p.input, p.output};
  std::map<TokenSeq, int> var{{{}, 0}, {p.output, 2}};
  var[p.input] = 1;  // identity examples: the input name wins
  int next = 3;
  auto var_of = [&](const TokenSeq& v) {
    auto it = var.find(v);
    if (it != var.end()) return it->second;
    var[v] = next;
    return next++;
  };
  struct Chain {
    char tag;
    TokenSeq cur;
    const TokenSeq* other;
    int at;
    bool live = true;
  };
  Chain in{'I', p.input, &p.output, 1}, out{'O', p.output, &p.input, 2};
  // A root is split like any tail: a lone non-constant token is already a value.
  for (Chain* c : {&in, &out})
    if (c->cur.size() == 1 && in_set(*c->other, c->cur.front())) c->live = false;
  std::vector<NaiveLiteral> lits;
  auto step = [&](Chain& c) {
    TokenSeq whole = c.cur;
    Token head = whole.front();
    TokenSeq tail(whole.begin() + 1, whole.end());
    bool headConst = !in_set(*c.other, head);
    NaiveLiteral lit{c.tag, c.at, "", 0};
    if (headConst && c.tag == 'O') lit.arg2 = "'" + head + "'";
    else if (headConst) lit.arg2 = "_";
    else lit.arg2 = "X" + std::to_string(var_of({head}));
    bool seen = memo.count(tail) > 0;
    lit.arg3 = var_of(tail);
    memo.insert(tail);
    lits.push_back(lit);
    bool constSingleton = tail.size() == 1 && !in_set(*c.other, tail.front());
    if (tail.empty() || seen || (tail.size() == 1 && !constSingleton)) c.live = false;
    c.cur = tail;
    c.at = lit.arg3;
  };
  while (in.live || out.live) {
    if (in.live) step(in);
    if (out.live) step(out);
  }
  return lits;
}

inline std::vector<NaiveLiteral> naive_view(const AbstractClause& c) {
  std::vector<NaiveLiteral> out;
  for (const auto& l : c.literals) {
    std::string a2 = l.arg2.type == SlotType::Var     ? "X" + std::to_string(l.arg2.var)
                     : l.arg2.type == SlotType::Const ? "'" + l.arg2.value + "'"
                                                      : "_";
    out.push_back({l.chain == ChainTag::In ? 'I' : 'O', l.arg1, a2, l.arg3});
  }
  return out;
}

// Guard oracle: positions where both inputs hold the same token that is
// absent from the respective outputs.
inline std::set<Token> naive_guards(const ExamplePair& a, const ExamplePair& b) {
  std::set<Token> g;
  for (std::size_t i = 0; i < std::min(a.input.size(), b.input.size()); ++i) {
    const auto& t = a.input[i];
    bool dropA = std::find(a.output.begin(), a.output.end(), t) == a.output.end();
    bool dropB = std::find(b.output.begin(), b.output.end(), b.input[i]) == b.output.end();
    if (dropA && dropB && t == b.input[i]) g.insert(t);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Generators

/// Random example over distinct tokens: a permutation, optionally with one
/// inserted constant or one dropped input token.
inline ExamplePair random_task(std::mt19937& rng, int L) {
  TokenSeq in = distinct(L, "v");
  TokenSeq out = in;
  std::shuffle(out.begin(), out.end(), rng);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: {
      std::size_t pos = std::uniform_int_distribution<std::size_t>(0, out.size())(rng);
      out.insert(out.begin() + static_cast<long>(pos), "k");
      break;
    }
    case 1:
      if (out.size() > 1) out.erase(out.begin() + std::uniform_int_distribution<long>(0, L - 1)(rng));
      break;
    default: break;
  }
  return {in, out};
}

template <typename T>
std::vector<T> random_runs(std::mt19937& rng, const std::vector<T>& alphabet, int maxLen) {
  std::vector<T> s;
  int n = std::uniform_int_distribution<int>(0, maxLen)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  while (static_cast<int>(s.size()) < n) {
    std::vector<T> pat(std::uniform_int_distribution<std::size_t>(1, 3)(rng));
    for (auto& x : pat) x = alphabet[pick(rng)];
    int k = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < k; ++i) s.insert(s.end(), pat.begin(), pat.end());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Property checks

struct Check {
  bool ok = true;
  long cases = 0;
  std::string detail;

  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
};

inline std::vector<TaskFile> corpus() { return load_corpus(TRANSDUCE_CORPUS_DIR); }

/// Final rule of each corpus task under the example-feeding protocol.
inline std::vector<std::pair<std::string, TransductionRule>> corpus_rules() {
  std::vector<std::pair<std::string, TransductionRule>> out;
  for (const auto& t : corpus()) {
    auto tl = learn_task(t);
    if (tl.outcome.learned() && tl.outcome.rule) out.emplace_back(t.name, *tl.outcome.rule);
  }
  return out;
}

inline std::vector<int> usable_lengths(const TransductionRule& r, int lo, int hi) {
  std::vector<int> out;
  for (int L = std::max(lo, 1); L <= hi; ++L)
    if (ok(instantiate(r, L))) out.push_back(L);
  return out;
}

template <typename T>
bool seq_round_trips(const std::vector<T>& s) {
  return expand(compress(s)) == s;
}

/// Codec round trip on random permutation tasks with L0 <= 8.
inline Check codec_round_trip(unsigned seed = 7, int perLength = 400) {
  Check c;
  std::mt19937 rng(seed);
  for (int L = 2; L <= 8; ++L) {
    for (int i = 0; i < perLength; ++i) {
      auto pair = random_task(rng, L);
      if (pair.output.empty()) continue;
      auto clause = abstract_pair(pair);
      if (naive_view(clause) != naive_clause(pair)) c.fail("clause differs from oracle at L=" + std::to_string(L));
      auto enc = encode(clause, L);
      if (decode(enc) != clause) c.fail("decode(encode(c)) != c for " + join(pair.input, " ") + " -> " + join(pair.output, " "));
      if (!seq_round_trips(enc.seq1) || !seq_round_trips(enc.seq2) || !seq_round_trips(enc.mask) ||
          !seq_round_trips(enc.order))
        c.fail("expand(compress(s)) != s on an encoding");
      ++c.cases;
    }
  }
  std::vector<int> ints{-3, -1, 0, 1, 2, 5};
  for (int i = 0; i < 3000; ++i) {
    auto s = random_runs(rng, ints, 24);
    if (!seq_round_trips(s)) c.fail("expand(compress(s)) != s on a random sequence");
    ++c.cases;
  }
  return c;
}

inline void all_inputs(const TokenSeq& alphabet, int L, TokenSeq& cur, const std::function<void(const TokenSeq&)>& f) {
  if (static_cast<int>(cur.size()) == L) return f(cur);
  for (const auto& t : alphabet) {
    cur.push_back(t);
    all_inputs(alphabet, L, cur, f);
    cur.pop_back();
  }
}

/// execute agrees with the brute-force oracle on every input of admissible
/// length <= 6 over a 3-token alphabet (plus a guard token when the rule has
/// guards, so that accepting paths are exercised too).
inline Check oracle_equivalence(const std::vector<std::pair<std::string, TransductionRule>>& rules) {
  Check c;
  for (const auto& [name, rule] : rules) {
    std::vector<TokenSeq> alphabets{{"x", "y", "z"}};
    std::set<Token> consts(rule.guards.begin(), rule.guards.end());
    for (const auto& run : rule.mask)
      for (const auto& k : run.pattern)
        if (k.type == SlotKindType::C) consts.insert(k.value);
    if (!consts.empty()) alphabets.push_back({"x", "y", *consts.begin()});
    if (consts.size() > 1) alphabets.push_back({"x", *consts.begin(), *std::next(consts.begin())});
    for (int L : usable_lengths(rule, 1, 6)) {
      auto clause = std::get<AbstractClause>(instantiate(rule, L));
      for (const auto& alpha : alphabets) {
        TokenSeq cur;
        all_inputs(alpha, L, cur, [&](const TokenSeq& input) {
          ++c.cases;
          auto got = execute(clause, input);
          auto want = oracle_execute(clause, input);
          if (ok(got)) {
            if (want != std::set<TokenSeq>{std::get<TokenSeq>(got)})
              c.fail(name + ": execute/oracle disagree on " + join(input, " "));
          } else if (error_of(got).kind == ExecError::Kind::GuardFailure) {
            if (!want.empty()) c.fail(name + ": guard failure but oracle found " + join(*want.begin(), " "));
          } else {
            c.fail(name + ": " + error_of(got).message());
          }
        });
      }
    }
  }
  return c;
}

/// Output length equals L + delta, and outputs only rearrange input tokens
/// plus rule constants (a pure permutation when there are none).
inline Check conservation_and_length(const std::vector<std::pair<std::string, TransductionRule>>& rules) {
  Check c;
  for (const auto& [name, rule] : rules) {
    std::set<Token> consts;
    bool drops = false;
    for (const auto& run : rule.mask)
      for (const auto& k : run.pattern) {
        if (k.type == SlotKindType::C) consts.insert(k.value);
        if (k.type == SlotKindType::A) drops = true;
      }
    auto lengths = usable_lengths(rule, rule.minLen, rule.minLen + 5);
    if (!rule.lengthRestricted && static_cast<int>(lengths.size()) != 6)
      c.fail(name + ": not every length in minLen..minLen+5 instantiates");
    for (int L : lengths) {
      ++c.cases;
      auto clause = std::get<AbstractClause>(instantiate(rule, L));
      auto input = distinct(L, "p");
      auto res = execute(clause, input, /*checkGuards=*/false);
      if (!ok(res)) {
        c.fail(name + ": execute failed at L=" + std::to_string(L));
        continue;
      }
      auto out = std::get<TokenSeq>(res);
      if (static_cast<int>(out.size()) != L + rule.delta) c.fail(name + ": length law broken at L=" + std::to_string(L));
      std::multiset<Token> fromInput;
      for (const auto& t : out) {
        if (std::find(input.begin(), input.end(), t) != input.end()) fromInput.insert(t);
        else if (!consts.count(t)) c.fail(name + ": output token '" + t + "' comes from nowhere");
      }
      if (consts.empty() && !drops && rule.delta == 0 && fromInput != std::multiset<Token>(input.begin(), input.end()))
        c.fail(name + ": permutation does not conserve tokens at L=" + std::to_string(L));
    }
  }
  return c;
}

/// Repeated learning yields byte-identical rule files, and files load back
/// to rules with identical instantiations.
inline Check determinism(int repeats = 3) {
  Check c;
  for (const auto& t : corpus()) {
    std::string first;
    for (int i = 0; i < repeats; ++i) {
      auto tl = learn_task(t);
      if (!tl.outcome.rule) break;
      auto text = serialize_rule(*tl.outcome.rule);
      ++c.cases;
      if (i == 0) first = text;
      else if (text != first) c.fail(t.name + ": rule file differs between runs");
      if (i == 0) {
        auto back = parse_rule(text);
        if (!(back == *tl.outcome.rule)) c.fail(t.name + ": rule file does not round-trip");
        int top = *tl.outcome.rule->trainingLengths.rbegin() + 10;
        for (int L = 1; L <= top; ++L) {
          auto a = instantiate(*tl.outcome.rule, L), b = instantiate(back, L);
          if (ok(a) != ok(b) || (ok(a) && std::get<AbstractClause>(a) != std::get<AbstractClause>(b)))
            c.fail(t.name + ": reloaded rule instantiates differently at L=" + std::to_string(L));
        }
      }
    }
  }
  return c;
}

template <typename F>
double seconds_of(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace support
