#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "transduce/codec.hpp"
#include "transduce/rule.hpp"

namespace transduce {

/// Why a rule could not produce an output. GuardFailure is an ordinary
/// outcome (the rule does not accept the input), not a fault.
struct ExecError {
  enum class Kind { TooShort, AmbiguousAtLength, GuardFailure, Internal };

  Kind kind = Kind::Internal;
  int minLen = 0;    // TooShort
  int position = 0;  // GuardFailure: 1-based input position, 0 if not on the input
  Token expected;
  Token got;
  std::string detail;

  static ExecError too_short(int minLen) { return {Kind::TooShort, minLen, 0, {}, {}, {}}; }
  static ExecError ambiguous() { return {Kind::AmbiguousAtLength, 0, 0, {}, {}, {}}; }
  static ExecError guard(int position, Token expected, Token got) {
    return {Kind::GuardFailure, 0, position, std::move(expected), std::move(got), {}};
  }
  static ExecError internal(std::string what) { return {Kind::Internal, 0, 0, {}, {}, std::move(what)}; }

  std::string message() const {
    switch (kind) {
      case Kind::TooShort: return "input too short (minimum length " + std::to_string(minLen) + ")";
      case Kind::AmbiguousAtLength: return "rule is ambiguous at this length";
      case Kind::GuardFailure:
        return "guard failure at position " + std::to_string(position) + ": expected '" + expected +
               "', got '" + got + "'";
      case Kind::Internal: return "internal error: " + detail;
    }
    return {};
  }

  friend bool operator==(const ExecError&, const ExecError&) = default;
};

template <typename T>
using Result = std::variant<T, ExecError>;

template <typename T>
bool ok(const Result<T>& r) { return std::holds_alternative<T>(r); }

template <typename T>
const ExecError& error_of(const Result<T>& r) { return std::get<ExecError>(r); }

/// Clause for input length L with no admissibility checks beyond decoding
/// and validation; nullopt if any of them fails.
inline std::optional<AbstractClause> try_instantiate(const TransductionRule& rule, int L) {
  auto enc = encoding_at(rule, L);
  if (!enc) return std::nullopt;
  try {
    auto clause = decode(*enc);
    if (!validate(clause).empty()) return std::nullopt;
    return clause;
  } catch (const InvalidEncoding&) {
    return std::nullopt;
  }
}

inline Result<AbstractClause> instantiate(const TransductionRule& rule, int L) {
  if (rule.lengthRestricted && !rule.trainingLengths.count(L)) {
    if (L < rule.minLen) return ExecError::too_short(rule.minLen);
    return ExecError::ambiguous();
  }
  if (L < rule.minLen) return ExecError::too_short(rule.minLen);
  auto enc = encoding_at(rule, L);
  if (!enc) return ExecError::too_short(rule.minLen);
  try {
    auto clause = decode(*enc);
    auto issues = validate(clause);
    if (!issues.empty()) return ExecError::internal(issues.front());
    return clause;
  } catch (const InvalidEncoding& e) {
    return ExecError::internal(e.what());
  }
}

/// Runs a clause on an input by propagating bindings to a fixpoint.
///
/// A literal whose first argument is bound is destructured into head and
/// tail; a literal whose head and tail are bound constructs its first
/// argument. Values are token lists throughout, so a token and the
/// one-element list holding it are the same value. With `checkGuards` off,
/// constant heads on bound lists are not compared.
inline Result<TokenSeq> execute(const AbstractClause& clause, const TokenSeq& input,
                                bool checkGuards = true) {
  VarIdx top = clause.maxVar;
  for (const auto& lit : clause.literals) {
    top = std::max({top, lit.arg1, lit.arg3, lit.arg2.is_var() ? lit.arg2.var : 0});
  }
  std::vector<std::optional<TokenSeq>> val(static_cast<std::size_t>(top) + 1);
  val[kNil] = TokenSeq{};
  val[kInputRoot] = input;
  const int L = static_cast<int>(input.size());

  std::vector<bool> done(clause.literals.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < clause.literals.size(); ++i) {
      if (done[i]) continue;
      const auto& lit = clause.literals[i];
      auto& whole = val[lit.arg1];
      int position = lit.chain == ChainTag::In && whole ? L - static_cast<int>(whole->size()) + 1 : 0;

      if (whole) {
        if (whole->empty()) return ExecError::internal("cannot destructure the empty list");
        const Token& head = whole->front();
        TokenSeq tail(whole->begin() + 1, whole->end());
        switch (lit.arg2.type) {
          case SlotType::Const:
            if (checkGuards && head != lit.arg2.value) return ExecError::guard(position, lit.arg2.value, head);
            break;
          case SlotType::Anon: break;
          case SlotType::Var: {
            auto& slot = val[lit.arg2.var];
            if (!slot) slot = TokenSeq{head};
            else if (*slot != TokenSeq{head})
              return ExecError::guard(position, join(*slot, " "), head);
            break;
          }
        }
        auto& rest = val[lit.arg3];
        if (!rest) rest = std::move(tail);
        else if (*rest != tail)
          return ExecError::guard(position, join(*rest, " "), join(tail, " "));
        done[i] = changed = true;
        continue;
      }

      const auto& rest = val[lit.arg3];
      if (!rest) continue;
      std::optional<Token> head;
      if (lit.arg2.type == SlotType::Const) {
        head = lit.arg2.value;
      } else if (lit.arg2.is_var() && val[lit.arg2.var]) {
        const auto& h = *val[lit.arg2.var];
        if (h.size() != 1) return ExecError::internal("head variable holds a list");
        head = h.front();
      }
      if (!head) continue;
      TokenSeq built{*head};
      built.insert(built.end(), rest->begin(), rest->end());
      whole = std::move(built);
      done[i] = changed = true;
    }
  }
  for (std::size_t i = 0; i < done.size(); ++i)
    if (!done[i]) return ExecError::internal("literal " + std::to_string(i + 1) + " never grounded");
  if (!val[kOutputRoot]) return ExecError::internal("output is unbound");
  return *val[kOutputRoot];
}

inline Result<TokenSeq> apply_rule(const TransductionRule& rule, const TokenSeq& input) {
  auto clause = instantiate(rule, static_cast<int>(input.size()));
  if (!ok(clause)) return error_of(clause);
  return execute(std::get<AbstractClause>(clause), input);
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace detail {

// Checks every literal against fixed values for both roots, walking the
// chains front to back. Returns false on any inconsistency.
inline bool satisfies(const AbstractClause& clause, const TokenSeq& input, const TokenSeq& output) {
  std::map<VarIdx, TokenSeq> val{{kNil, {}}, {kInputRoot, input}, {kOutputRoot, output}};
  auto bind = [&](VarIdx v, const TokenSeq& x) {
    auto [it, inserted] = val.emplace(v, x);
    return inserted || it->second == x;
  };
  for (const auto& lit : clause.literals) {
    auto it = val.find(lit.arg1);
    if (it == val.end() || it->second.empty()) return false;
    TokenSeq whole = it->second;
    TokenSeq head{whole.front()};
    TokenSeq tail(whole.begin() + 1, whole.end());
    if (lit.arg2.type == SlotType::Const && lit.arg2.value != whole.front()) return false;
    if (lit.arg2.is_var() && !bind(lit.arg2.var, head)) return false;
    if (!bind(lit.arg3, tail)) return false;
  }
  return true;
}

}  // namespace detail

/// Every output the clause relates to `input`, by exhaustive search.
///
/// The input chain is destructured directly. Each variable that the output
/// chain reads but the input chain leaves open is enumerated over all input
/// tokens and clause constants (and, for the final tail, all contiguous
/// slices of the input); each resulting output candidate is then checked
/// against every literal. Intended for short inputs.
inline std::set<TokenSeq> oracle_execute(const AbstractClause& clause, const TokenSeq& input) {
  std::map<VarIdx, TokenSeq> known{{kNil, {}}, {kInputRoot, input}};
  for (const auto& lit : clause.literals) {
    if (lit.chain != ChainTag::In) continue;
    auto it = known.find(lit.arg1);
    if (it == known.end() || it->second.empty()) return {};
    TokenSeq whole = it->second;
    if (lit.arg2.type == SlotType::Const && lit.arg2.value != whole.front()) return {};
    if (lit.arg2.is_var()) {
      auto [h, fresh] = known.emplace(lit.arg2.var, TokenSeq{whole.front()});
      if (!fresh && h->second != TokenSeq{whole.front()}) return {};
    }
    TokenSeq tail(whole.begin() + 1, whole.end());
    auto [t, fresh] = known.emplace(lit.arg3, tail);
    if (!fresh && t->second != tail) return {};
  }

  std::set<TokenSeq> results;
  if (auto root = known.find(kOutputRoot); root != known.end()) {
    if (detail::satisfies(clause, input, root->second)) results.insert(root->second);
    return results;
  }

  std::vector<const Literal*> outChain;
  for (const auto& lit : clause.literals)
    if (lit.chain == ChainTag::Out) outChain.push_back(&lit);
  if (outChain.empty()) return {};

  std::set<TokenSeq> tokens;
  for (const auto& t : input) tokens.insert({t});
  for (const auto& lit : clause.literals)
    if (lit.arg2.type == SlotType::Const) tokens.insert({lit.arg2.value});

  std::vector<VarIdx> open;
  for (const auto* lit : outChain)
    if (lit->arg2.is_var() && !known.count(lit->arg2.var) &&
        std::find(open.begin(), open.end(), lit->arg2.var) == open.end())
      open.push_back(lit->arg2.var);
  VarIdx lastTail = outChain.back()->arg3;

  std::vector<TokenSeq> tailChoices;
  if (auto it = known.find(lastTail); it != known.end()) {
    tailChoices.push_back(it->second);
  } else {
    std::set<TokenSeq> slices(tokens.begin(), tokens.end());
    slices.insert(TokenSeq{});
    for (std::size_t i = 0; i < input.size(); ++i)
      for (std::size_t j = i + 2; j <= input.size(); ++j)
        slices.insert(TokenSeq(input.begin() + i, input.begin() + j));
    tailChoices.assign(slices.begin(), slices.end());
  }

  std::vector<TokenSeq> alphabet(tokens.begin(), tokens.end());
  std::map<VarIdx, TokenSeq> assign = known;
  auto emit = [&]() {
    for (const auto& tail : tailChoices) {
      if (known.count(lastTail) == 0 && assign.count(lastTail) && assign[lastTail] != tail) continue;
      TokenSeq out;
      for (const auto* lit : outChain) {
        if (lit->arg2.type == SlotType::Const) out.push_back(lit->arg2.value);
        else if (lit->arg2.is_var()) out.push_back(assign[lit->arg2.var].front());
        else return;  // an anonymous head cannot be produced
      }
      out.insert(out.end(), tail.begin(), tail.end());
      if (detail::satisfies(clause, input, out)) results.insert(out);
    }
  };
  auto search = [&](auto&& self, std::size_t k) -> void {
    if (k == open.size()) {
      emit();
      return;
    }
    for (const auto& a : alphabet) {
      assign[open[k]] = a;
      self(self, k + 1);
    }
    assign.erase(open[k]);
  };
  search(search, 0);
  return results;
}

}  // namespace transduce
