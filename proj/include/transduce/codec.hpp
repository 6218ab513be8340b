#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "transduce/abstraction.hpp"
#include "transduce/errors.hpp"

namespace transduce {

enum class SlotKindType { V, C, A };

/// Kind of a literal's second argument, plus whether its third argument is
/// the empty list.
struct SlotKind {
  SlotKindType type = SlotKindType::V;
  Token value;  // constant value when type == C
  bool nilTail = false;

  static SlotKind var() { return {SlotKindType::V, {}, false}; }
  static SlotKind constant(Token t, bool nil = false) { return {SlotKindType::C, std::move(t), nil}; }
  static SlotKind anon(bool nil = false) { return {SlotKindType::A, {}, nil}; }

  friend bool operator==(const SlotKind&, const SlotKind&) = default;
  friend auto operator<=>(const SlotKind&, const SlotKind&) = default;
};

/// Integer-sequence form of an abstract clause.
///
/// seq1 holds the successive differences of second-argument variable indices
/// over V slots. seq2 holds one code per literal for its third argument:
/// 0 for a fresh variable, k > 0 for a back-reference to variable k, and
/// -d < 0 for a back-reference d places below the next fresh index. Literals
/// whose mask entry has nilTail carry 0 and end on the empty list.
struct EncodedClause {
  VarIdx base2 = 0;
  std::vector<int> seq1;
  std::vector<int> seq2;
  std::vector<SlotKind> mask;
  std::vector<ChainTag> order;
  int L0 = 0;
  int delta = 0;

  friend bool operator==(const EncodedClause&, const EncodedClause&) = default;
};

// ---------------------------------------------------------------------------
// Run compression

template <typename T>
struct Run {
  int count = 1;
  std::vector<T> pattern;

  friend bool operator==(const Run&, const Run&) = default;
};

template <typename T>
using CompressedSeq = std::vector<Run<T>>;

template <typename T>
std::vector<T> expand(const CompressedSeq<T>& cseq) {
  std::vector<T> out;
  for (const auto& run : cseq)
    for (int k = 0; k < run.count; ++k) out.insert(out.end(), run.pattern.begin(), run.pattern.end());
  return out;
}

/// Segments `seq` into runs of repeated patterns.
///
/// The chosen segmentation minimizes the number of written symbols (the sum
/// of pattern lengths), then the number of terms; remaining ties prefer the
/// shorter pattern, left to right. A count-1 term is always a single symbol.
template <typename T>
CompressedSeq<T> compress(const std::vector<T>& seq) {
  const std::size_t n = seq.size();
  struct Best {
    std::size_t cost = 0, terms = 0;
    std::vector<std::size_t> lens;
    std::size_t next = 0;
    Run<T> head;
  };
  std::vector<std::optional<Best>> best(n + 1);
  best[n] = Best{};

  auto better = [](const Best& a, const Best& b) {
    return std::tie(a.cost, a.terms, a.lens) < std::tie(b.cost, b.terms, b.lens);
  };
  auto consider = [&](std::size_t i, std::size_t j, Run<T> run) {
    const Best& rest = *best[j];
    Best cand;
    cand.cost = rest.cost + run.pattern.size();
    cand.terms = rest.terms + 1;
    cand.lens.reserve(rest.lens.size() + 1);
    cand.lens.push_back(run.pattern.size());
    cand.lens.insert(cand.lens.end(), rest.lens.begin(), rest.lens.end());
    cand.next = j;
    cand.head = std::move(run);
    if (!best[i] || better(cand, *best[i])) best[i] = std::move(cand);
  };

  for (std::size_t i = n; i-- > 0;) {
    consider(i, i + 1, Run<T>{1, {seq[i]}});
    for (std::size_t p = 1; i + 2 * p <= n; ++p) {
      std::size_t k = 1;
      while (i + (k + 1) * p <= n &&
             std::equal(seq.begin() + i, seq.begin() + i + p, seq.begin() + i + k * p)) {
        ++k;
        consider(i, i + k * p,
                 Run<T>{static_cast<int>(k), std::vector<T>(seq.begin() + i, seq.begin() + i + p)});
      }
    }
  }

  CompressedSeq<T> out;
  for (std::size_t i = 0; i < n; i = best[i]->next) out.push_back(best[i]->head);
  return out;
}

// ---------------------------------------------------------------------------
// Clause validation

/// Lists the well-formedness violations of a clause; empty means valid.
inline std::vector<std::string> validate(const AbstractClause& clause) {
  std::vector<std::string> issues;
  auto where = [](std::size_t i) { return "literal " + std::to_string(i + 1) + ": "; };

  VarIdx inCursor = kInputRoot, outCursor = kOutputRoot;
  VarIdx counter = kFirstBodyVar;
  std::set<VarIdx> used;
  auto reference = [&](std::size_t i, VarIdx v, bool allowNil) {
    if (v == kNil && allowNil) return;
    if (v < kInputRoot) {
      issues.push_back(where(i) + "invalid index " + std::to_string(v));
    } else if (v > counter) {
      issues.push_back(where(i) + "index X" + std::to_string(v) + " skips the fresh counter X" +
                       std::to_string(counter));
    } else if (v == counter) {
      ++counter;
    }
    used.insert(v);
  };

  for (std::size_t i = 0; i < clause.literals.size(); ++i) {
    const auto& lit = clause.literals[i];
    VarIdx& cursor = lit.chain == ChainTag::In ? inCursor : outCursor;
    if (lit.arg1 != cursor)
      issues.push_back(where(i) + "arg1 X" + std::to_string(lit.arg1) + " breaks chain linkage (expected X" +
                       std::to_string(cursor) + ")");
    if (lit.arg1 == kNil) issues.push_back(where(i) + "chain continues past the empty list");
    if (lit.arg1 == lit.arg3) issues.push_back(where(i) + "arg1 equals arg3");
    if (lit.arg3 == kInputRoot) {
      // Allowed only on the output chain (output ends with the whole input).
      if (lit.chain == ChainTag::In) issues.push_back(where(i) + "input chain loops to its root");
    }
    reference(i, lit.arg1, false);
    if (lit.arg2.is_var()) reference(i, lit.arg2.var, false);
    reference(i, lit.arg3, true);
    cursor = lit.arg3;
  }
  if (clause.maxVar != counter - 1)
    issues.push_back("maxVar X" + std::to_string(clause.maxVar) + " differs from last index X" +
                     std::to_string(counter - 1));

  // Groundability: everything must follow from the input and the empty list.
  std::set<VarIdx> ground{kNil, kInputRoot};
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& lit : clause.literals) {
      if (ground.count(lit.arg1)) {
        if (lit.arg2.is_var()) changed |= ground.insert(lit.arg2.var).second;
        changed |= ground.insert(lit.arg3).second;
      } else {
        bool headKnown = lit.arg2.type == SlotType::Const ||
                         (lit.arg2.is_var() && ground.count(lit.arg2.var));
        if (headKnown && ground.count(lit.arg3)) changed |= ground.insert(lit.arg1).second;
      }
    }
  }
  used.insert(kOutputRoot);
  for (VarIdx v : used)
    if (!ground.count(v)) issues.push_back("X" + std::to_string(v) + " is not groundable from the input");
  return issues;
}

// ---------------------------------------------------------------------------
// Encode / decode

namespace detail {

struct Arg3Info {
  bool fresh = false;
  bool nil = false;
  VarIdx index = 0;
  VarIdx counter = 0;  // next fresh index when arg3 is read
};

// Walks the clause in reading order and records, for each third argument,
// whether it introduces a variable and the fresh counter at that point.
inline std::vector<Arg3Info> arg3_info(const AbstractClause& clause) {
  std::vector<Arg3Info> out;
  VarIdx counter = kFirstBodyVar;
  for (const auto& lit : clause.literals) {
    if (lit.arg2.is_var() && lit.arg2.var == counter) ++counter;
    Arg3Info info;
    info.index = lit.arg3;
    info.counter = counter;
    info.nil = lit.arg3 == kNil;
    info.fresh = !info.nil && lit.arg3 == counter;
    if (info.fresh) ++counter;
    out.push_back(info);
  }
  return out;
}

}  // namespace detail

inline EncodedClause encode(const AbstractClause& clause, int L0) {
  EncodedClause enc;
  enc.L0 = L0;
  enc.delta = clause.delta;
  std::optional<VarIdx> prev;
  for (const auto& lit : clause.literals) {
    enc.order.push_back(lit.chain);
    bool nil = lit.arg3 == kNil;
    switch (lit.arg2.type) {
      case SlotType::Var:
        enc.mask.push_back({SlotKindType::V, {}, nil});
        if (prev) enc.seq1.push_back(lit.arg2.var - *prev);
        else enc.base2 = lit.arg2.var;
        prev = lit.arg2.var;
        break;
      case SlotType::Const: enc.mask.push_back(SlotKind::constant(lit.arg2.value, nil)); break;
      case SlotType::Anon: enc.mask.push_back(SlotKind::anon(nil)); break;
    }
  }
  for (const auto& info : detail::arg3_info(clause))
    enc.seq2.push_back(info.nil || info.fresh ? 0 : info.index);
  return enc;
}

/// Rebuilds the clause described by an encoding. The result is not validated
/// here; callers combine decode with validate().
inline AbstractClause decode(const EncodedClause& enc) {
  const std::size_t n = enc.order.size();
  if (enc.mask.size() != n || enc.seq2.size() != n)
    throw InvalidEncoding("order, mask and seq2 lengths disagree");
  std::size_t vcount = std::count_if(enc.mask.begin(), enc.mask.end(),
                                     [](const SlotKind& k) { return k.type == SlotKindType::V; });
  if (enc.seq1.size() + 1 != std::max<std::size_t>(vcount, 1) || (vcount == 0 && !enc.seq1.empty()))
    throw InvalidEncoding("seq1 length does not match the number of variable slots");

  AbstractClause clause;
  clause.delta = enc.delta;
  VarIdx counter = kFirstBodyVar;
  VarIdx inCursor = kInputRoot, outCursor = kOutputRoot;
  VarIdx arg2 = enc.base2;
  std::size_t vseen = 0;
  auto reference = [&](VarIdx v) {
    if (v < kInputRoot) throw InvalidEncoding("variable index below 1");
    if (v > counter) throw InvalidEncoding("variable index X" + std::to_string(v) + " past fresh counter");
    if (v == counter) ++counter;
  };

  for (std::size_t i = 0; i < n; ++i) {
    VarIdx& cursor = enc.order[i] == ChainTag::In ? inCursor : outCursor;
    if (cursor == kNil) throw InvalidEncoding("chain continues past the empty list");
    Literal lit{enc.order[i], cursor, Slot::anon(), kNil};
    const auto& kind = enc.mask[i];
    switch (kind.type) {
      case SlotKindType::V:
        if (vseen > 0) arg2 += enc.seq1[vseen - 1];
        ++vseen;
        reference(arg2);
        lit.arg2 = Slot::variable(arg2);
        break;
      case SlotKindType::C: lit.arg2 = Slot::constant(kind.value); break;
      case SlotKindType::A: lit.arg2 = Slot::anon(); break;
    }
    int code = enc.seq2[i];
    if (kind.nilTail) {
      if (code != 0) throw InvalidEncoding("empty-list literal with a nonzero seq2 code");
      lit.arg3 = kNil;
    } else if (code == 0) {
      lit.arg3 = counter++;
    } else {
      VarIdx target = code > 0 ? code : counter + code;
      if (target < kInputRoot || target >= counter) throw InvalidEncoding("back-reference out of range");
      lit.arg3 = target;
    }
    if (lit.arg3 == lit.arg1) throw InvalidEncoding("literal refers to itself");
    cursor = lit.arg3;
    clause.literals.push_back(std::move(lit));
  }
  clause.maxVar = counter - 1;
  return clause;
}

}  // namespace transduce
