#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "transduce/clause.hpp"
#include "transduce/errors.hpp"
#include "transduce/tokens.hpp"

namespace transduce {

/// Variable index. 1 is the input root, 2 the output root, body variables
/// start at 3. Index 0 is reserved for the empty list.
using VarIdx = int;

inline constexpr VarIdx kNil = 0;
inline constexpr VarIdx kInputRoot = 1;
inline constexpr VarIdx kOutputRoot = 2;
inline constexpr VarIdx kFirstBodyVar = 3;

enum class SlotType { Var, Const, Anon };

/// Second argument of a literal.
struct Slot {
  SlotType type = SlotType::Anon;
  VarIdx var = 0;
  Token value;

  static Slot variable(VarIdx v) { return {SlotType::Var, v, {}}; }
  static Slot constant(Token t) { return {SlotType::Const, 0, std::move(t)}; }
  static Slot anon() { return {SlotType::Anon, 0, {}}; }

  bool is_var() const { return type == SlotType::Var; }

  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// list(arg1, arg2, arg3) with arg1 = [arg2 | arg3].
struct Literal {
  ChainTag chain;
  VarIdx arg1;
  Slot arg2;
  VarIdx arg3;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct AbstractClause {
  std::vector<Literal> literals;
  VarIdx maxVar = kOutputRoot;
  int delta = 0;

  friend bool operator==(const AbstractClause&, const AbstractClause&) = default;
};

struct ConstantReport {
  std::set<Token> outputConsts;  // in the output, absent from the input
  std::set<Token> inputConsts;   // in the input, absent from the output
};

inline ConstantReport classify_constants(const ExamplePair& pair) {
  std::set<Token> in(pair.input.begin(), pair.input.end());
  std::set<Token> out(pair.output.begin(), pair.output.end());
  ConstantReport r;
  std::set_difference(out.begin(), out.end(), in.begin(), in.end(),
                      std::inserter(r.outputConsts, r.outputConsts.end()));
  std::set_difference(in.begin(), in.end(), out.begin(), out.end(),
                      std::inserter(r.inputConsts, r.inputConsts.end()));
  return r;
}

/// Non-constant tokens occurring more than once on either side. They alias to
/// one variable, which can make the learned rule check equalities the user
/// did not intend.
inline std::set<Token> repeated_tokens(const ExamplePair& pair) {
  auto consts = classify_constants(pair);
  std::set<Token> repeated;
  auto scan = [&](const TokenSeq& seq, const std::set<Token>& skip) {
    std::set<Token> seen;
    for (const auto& t : seq) {
      if (skip.count(t)) continue;
      if (!seen.insert(t).second) repeated.insert(t);
    }
  };
  scan(pair.input, consts.inputConsts);
  scan(pair.output, consts.outputConsts);
  return repeated;
}

/// Replaces every list and token of a concrete clause by a variable numbered
/// in order of first appearance. Output constants stay literal; input
/// constants become anonymous unless listed in `guardValues`.
inline AbstractClause abstract_clause(const ConcreteClause& concrete,
                                      const ConstantReport& consts,
                                      const std::set<Token>& guardValues = {}) {
  AbstractClause clause;
  clause.delta = static_cast<int>(concrete.pair.output.size()) -
                 static_cast<int>(concrete.pair.input.size());

  std::map<TokenSeq, VarIdx> vars;
  vars[concrete.pair.output] = kOutputRoot;
  vars[concrete.pair.input] = kInputRoot;
  VarIdx next = kFirstBodyVar;
  auto lookup = [&](const TokenSeq& value) -> VarIdx {
    if (value.empty()) return kNil;
    auto [it, inserted] = vars.try_emplace(value, next);
    if (inserted) ++next;
    return it->second;
  };

  VarIdx inCursor = kInputRoot, outCursor = kOutputRoot;
  TokenSeq inValue = concrete.pair.input, outValue = concrete.pair.output;
  for (const auto& step : concrete.steps) {
    bool isIn = step.chain == ChainTag::In;
    VarIdx& cursor = isIn ? inCursor : outCursor;
    TokenSeq& expected = isIn ? inValue : outValue;
    if (step.whole != expected || step.whole.empty())
      throw MalformedClause("step whole was not introduced by its chain");
    expected = step.tail;

    Literal lit{step.chain, cursor, Slot::anon(), 0};
    if (consts.outputConsts.count(step.head)) {
      lit.arg2 = Slot::constant(step.head);
    } else if (consts.inputConsts.count(step.head)) {
      lit.arg2 = guardValues.count(step.head) ? Slot::constant(step.head) : Slot::anon();
    } else {
      lit.arg2 = Slot::variable(lookup(TokenSeq{step.head}));
    }
    lit.arg3 = lookup(step.tail);
    cursor = lit.arg3;
    clause.literals.push_back(std::move(lit));
  }
  clause.maxVar = next - 1;
  return clause;
}

inline AbstractClause abstract_pair(const ExamplePair& pair,
                                    const std::set<Token>& guardValues = {}) {
  return abstract_clause(decompose(pair), classify_constants(pair), guardValues);
}

namespace detail {

inline bool same_shape(const AbstractClause& a, const AbstractClause& b) {
  if (a.literals.size() != b.literals.size()) return false;
  for (std::size_t i = 0; i < a.literals.size(); ++i) {
    if (a.literals[i].chain != b.literals[i].chain) return false;
    if (a.literals[i].arg2.type != b.literals[i].arg2.type) return false;
  }
  return true;
}

}  // namespace detail

/// Input constants that sit at the same literal position with the same value
/// in both examples. These become guards checked at execution time.
inline std::set<Token> merge_guards(const ExamplePair& a, const ExamplePair& b) {
  if (a.input.size() != b.input.size() || a.output.size() != b.output.size())
    throw ShapeMismatch("guard merge needs examples of equal lengths");
  auto ca = decompose(a), cb = decompose(b);
  auto xa = abstract_clause(ca, classify_constants(a));
  auto xb = abstract_clause(cb, classify_constants(b));
  if (!detail::same_shape(xa, xb)) throw ShapeMismatch("examples have different clause shapes");

  std::set<Token> guards;
  for (std::size_t i = 0; i < xa.literals.size(); ++i) {
    const auto& la = xa.literals[i];
    if (la.chain != ChainTag::In || la.arg2.type != SlotType::Anon) continue;
    if (ca.steps[i].head == cb.steps[i].head) guards.insert(ca.steps[i].head);
  }
  return guards;
}

}  // namespace transduce
