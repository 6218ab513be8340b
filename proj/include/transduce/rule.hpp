#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "transduce/codec.hpp"

namespace transduce {

/// Run count as a function of the input length: slope * L + offset.
/// A zero slope is a plain constant.
struct CountExpr {
  int slope = 0;
  int offset = 1;

  static CountExpr constant(int k) { return {0, k}; }
  static CountExpr affine(int a, int b) { return {a, b}; }

  int at(int L) const { return slope * L + offset; }
  bool is_constant() const { return slope == 0; }

  friend bool operator==(const CountExpr&, const CountExpr&) = default;
  friend auto operator<=>(const CountExpr&, const CountExpr&) = default;
};

/// Renders as "4", "L-1", "2L+3".
inline std::string to_string(const CountExpr& c) {
  if (c.slope == 0) return std::to_string(c.offset);
  std::string s = c.slope == 1 ? "L" : std::to_string(c.slope) + "L";
  if (c.offset > 0) s += "+" + std::to_string(c.offset);
  if (c.offset < 0) s += std::to_string(c.offset);
  return s;
}

template <typename T>
struct GeneralRun {
  CountExpr count;
  std::vector<T> pattern;

  friend bool operator==(const GeneralRun&, const GeneralRun&) = default;
};

template <typename T>
using GeneralizedSeq = std::vector<GeneralRun<T>>;

/// Expands a generalized sequence at length L; nullopt when a count drops
/// below one.
template <typename T>
std::optional<std::vector<T>> expand_at(const GeneralizedSeq<T>& gseq, int L) {
  std::vector<T> out;
  for (const auto& run : gseq) {
    int k = run.count.at(L);
    if (k < 1) return std::nullopt;
    for (int i = 0; i < k; ++i) out.insert(out.end(), run.pattern.begin(), run.pattern.end());
  }
  return out;
}

/// Length of the expansion as (slope, offset) in L.
template <typename T>
std::pair<int, int> length_poly(const GeneralizedSeq<T>& gseq) {
  int a = 0, b = 0;
  for (const auto& run : gseq) {
    int p = static_cast<int>(run.pattern.size());
    a += run.count.slope * p;
    b += run.count.offset * p;
  }
  return {a, b};
}

/// The learned artifact: length-parameterized encodings of a clause.
struct TransductionRule {
  GeneralizedSeq<int> seq1;
  GeneralizedSeq<int> seq2;
  GeneralizedSeq<SlotKind> mask;
  GeneralizedSeq<ChainTag> order;
  VarIdx base2 = 0;
  int delta = 0;
  int minLen = 2;
  std::set<Token> guards;
  std::set<int> trainingLengths;
  // Usable only at the training lengths: no length-independent reading
  // of the examples was singled out.
  bool lengthRestricted = false;

  friend bool operator==(const TransductionRule&, const TransductionRule&) = default;
};

/// Encoding of the rule at length L, or nullopt when a count is not positive.
inline std::optional<EncodedClause> encoding_at(const TransductionRule& rule, int L) {
  auto s1 = expand_at(rule.seq1, L);
  auto s2 = expand_at(rule.seq2, L);
  auto m = expand_at(rule.mask, L);
  auto o = expand_at(rule.order, L);
  if (!s1 || !s2 || !m || !o) return std::nullopt;
  EncodedClause enc;
  enc.base2 = rule.base2;
  enc.seq1 = std::move(*s1);
  enc.seq2 = std::move(*s2);
  enc.mask = std::move(*m);
  enc.order = std::move(*o);
  enc.L0 = L;
  enc.delta = rule.delta;
  return enc;
}

}  // namespace transduce
