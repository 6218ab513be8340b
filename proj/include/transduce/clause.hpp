#pragma once

#include <set>
#include <utility>
#include <vector>

#include "transduce/errors.hpp"
#include "transduce/tokens.hpp"

namespace transduce {

enum class ChainTag { In, Out };

/// One application of the destructuring axiom: whole = [head | tail].
struct DecompStep {
  ChainTag chain;
  TokenSeq whole;
  Token head;
  TokenSeq tail;

  friend bool operator==(const DecompStep&, const DecompStep&) = default;
};

struct ConcreteClause {
  ExamplePair pair;
  std::vector<DecompStep> steps;
};

namespace detail {

inline bool contains(const TokenSeq& seq, const Token& t) {
  for (const auto& s : seq)
    if (s == t) return true;
  return false;
}

// Walks one chain a step at a time. The chain stops after a step whose tail
// was already seen, whose tail is empty, or whose tail is a singleton that is
// not a constant of this chain. Constant singletons are decomposed down to
// the empty list so the constant keeps its own slot.
class ChainWalker {
 public:
  ChainWalker(ChainTag tag, TokenSeq root, const TokenSeq& other)
      : tag_(tag), current_(std::move(root)), other_(&other), active_(current_.size() >= 1) {
    if (current_.size() == 1) active_ = is_constant(current_.front());
  }

  bool active() const { return active_; }

  DecompStep step(std::set<TokenSeq>& memo) {
    DecompStep s{tag_, current_, current_.front(),
                 TokenSeq(current_.begin() + 1, current_.end())};
    bool stop = s.tail.empty() || memo.count(s.tail) > 0 ||
                (s.tail.size() == 1 && !is_constant(s.tail.front()));
    memo.insert(s.whole);
    memo.insert(s.tail);
    current_ = s.tail;
    active_ = !stop;
    return s;
  }

 private:
  bool is_constant(const Token& t) const { return !contains(*other_, t); }

  ChainTag tag_;
  TokenSeq current_;
  const TokenSeq* other_;
  bool active_;
};

}  // namespace detail

/// Builds the concrete transduction clause of an example pair.
///
/// Steps alternate In, Out row by row while both chains are active; once a
/// chain stops the remaining steps of the other follow consecutively.
inline ConcreteClause decompose(const ExamplePair& pair) {
  if (pair.input.size() < 2) throw InputTooShort(pair.input.size());

  ConcreteClause clause{pair, {}};
  std::set<TokenSeq> memo{pair.input, pair.output};
  detail::ChainWalker in(ChainTag::In, pair.input, pair.output);
  detail::ChainWalker out(ChainTag::Out, pair.output, pair.input);
  while (in.active() || out.active()) {
    if (in.active()) clause.steps.push_back(in.step(memo));
    if (out.active()) clause.steps.push_back(out.step(memo));
  }
  return clause;
}

/// Per-chain step counts of decompose(pair), as (in, out).
inline std::pair<int, int> step_count(const ExamplePair& pair) {
  auto clause = decompose(pair);
  int in = 0, out = 0;
  for (const auto& s : clause.steps) (s.chain == ChainTag::In ? in : out)++;
  return {in, out};
}

}  // namespace transduce
