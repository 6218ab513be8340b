#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "transduce/abstraction.hpp"
#include "transduce/clause.hpp"
#include "transduce/codec.hpp"
#include "transduce/engine.hpp"
#include "transduce/errors.hpp"
#include "transduce/rule.hpp"

namespace transduce {

// ---------------------------------------------------------------------------
// Rendering

inline std::string symbol_text(int v) { return std::to_string(v); }

inline std::string symbol_text(ChainTag t) { return t == ChainTag::In ? "I" : "O"; }

inline std::string symbol_text(const SlotKind& k) {
  std::string s;
  switch (k.type) {
    case SlotKindType::V: s = "V"; break;
    case SlotKindType::A: s = "A"; break;
    case SlotKindType::C: s = "'" + k.value + "'"; break;
  }
  if (k.nilTail) s += "/";
  return s;
}

/// "(L-1)*[2],0,(L-3)*[-2]" style rendering of a generalized sequence.
template <typename T>
std::string formula(const GeneralizedSeq<T>& g) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ",";
    const auto& run = g[i];
    if (run.count == CountExpr::constant(1) && run.pattern.size() == 1) {
      out += symbol_text(run.pattern.front());
      continue;
    }
    std::string count = to_string(run.count);
    if (!run.count.is_constant()) count = "(" + count + ")";
    out += count + "*[";
    for (std::size_t j = 0; j < run.pattern.size(); ++j) {
      if (j) out += ",";
      out += symbol_text(run.pattern[j]);
    }
    out += "]";
  }
  return out;
}

inline std::string describe(const TransductionRule& r) {
  std::ostringstream os;
  os << "seq1=" << formula(r.seq1) << "\n"
     << "seq2=" << formula(r.seq2) << "\n"
     << "mask=" << formula(r.mask) << "\n"
     << "order=" << formula(r.order) << "\n"
     << "base2=" << r.base2 << " delta=" << r.delta << " minLen=" << r.minLen;
  return os.str();
}

// ---------------------------------------------------------------------------
// Candidate enumeration

namespace detail {

template <typename T>
struct SeqOption {
  GeneralizedSeq<T> seq;
  std::pair<int, int> length;
  std::pair<int, int> vcount;  // only meaningful for the mask
  int slopes = 0;
  int relative = 0;  // seq2 only: number of counter-relative back-references
};

inline int v_symbols(const std::vector<SlotKind>& p) {
  return static_cast<int>(std::count_if(p.begin(), p.end(),
                                        [](const SlotKind& k) { return k.type == SlotKindType::V; }));
}
template <typename T>
int v_symbols(const std::vector<T>&) { return 0; }

// Every way of turning the counts of `cseq` into count expressions: runs of
// count k >= 2 become k, L + (k - L0) or 2L + (k - 2*L0).
template <typename T>
std::vector<SeqOption<T>> count_options(const CompressedSeq<T>& cseq, int L0) {
  std::vector<SeqOption<T>> out{SeqOption<T>{}};
  for (const auto& run : cseq) {
    std::vector<CountExpr> choices{CountExpr::constant(run.count)};
    if (run.count >= 2) {
      choices.push_back(CountExpr::affine(1, run.count - L0));
      choices.push_back(CountExpr::affine(2, run.count - 2 * L0));
    }
    int p = static_cast<int>(run.pattern.size());
    int v = v_symbols(run.pattern);
    std::vector<SeqOption<T>> next;
    next.reserve(out.size() * choices.size());
    for (const auto& base : out) {
      for (const auto& c : choices) {
        SeqOption<T> opt = base;
        opt.seq.push_back({c, run.pattern});
        opt.length.first += c.slope * p;
        opt.length.second += c.offset * p;
        opt.vcount.first += c.slope * v;
        opt.vcount.second += c.offset * v;
        opt.slopes += c.slope;
        next.push_back(std::move(opt));
      }
    }
    out = std::move(next);
  }
  return out;
}

template <typename T>
std::map<std::pair<int, int>, std::vector<const SeqOption<T>*>> by_length(const std::vector<SeqOption<T>>& opts) {
  std::map<std::pair<int, int>, std::vector<const SeqOption<T>*>> out;
  for (const auto& o : opts) out[o.length].push_back(&o);
  return out;
}

template <typename T>
bool has_repetition(const CompressedSeq<T>& c) {
  return std::any_of(c.begin(), c.end(), [](const Run<T>& r) { return r.count >= 2; });
}

inline TokenSeq probe_input(int L) {
  TokenSeq in;
  for (int i = 1; i <= L; ++i) in.push_back("\x1f" + std::to_string(i));
  return in;
}

// Decodes, validates and runs the rule at L on distinct placeholder tokens
// (constants unchecked); the output must obey the length law.
inline bool admissible_at(const TransductionRule& rule, int L) {
  if (L < 1) return false;
  auto clause = try_instantiate(rule, L);
  if (!clause) return false;
  auto out = execute(*clause, probe_input(L), /*checkGuards=*/false);
  return ok(out) && static_cast<int>(std::get<TokenSeq>(out).size()) == L + rule.delta;
}

inline int compute_min_len(const TransductionRule& rule, int L0) {
  int L = L0;
  while (L > 1 && admissible_at(rule, L - 1)) --L;
  return L;
}

}  // namespace detail

/// Candidates ordered from simplest: fewest length-dependent counts, then
/// fewest counter-relative references, then by rendering.
struct Candidate {
  TransductionRule rule;
  int slopes = 0;
  int relative = 0;

  std::string signature() const { return describe(rule); }
};

inline bool simpler(const Candidate& a, const Candidate& b) {
  return std::make_tuple(a.slopes, a.relative, a.signature()) <
         std::make_tuple(b.slopes, b.relative, b.signature());
}

using CandidateSet = std::vector<Candidate>;

/// Instantiations at the given lengths; two candidates with equal keys are
/// the same transformation for our purposes.
inline std::vector<std::optional<AbstractClause>> semantic_key(const TransductionRule& rule,
                                                              const std::set<int>& lengths) {
  std::vector<std::optional<AbstractClause>> key;
  for (int L : lengths) key.push_back(detail::admissible_at(rule, L) ? try_instantiate(rule, L) : std::nullopt);
  return key;
}

/// Sorts by simplicity and keeps the simplest member of each semantic class.
inline CandidateSet dedup(CandidateSet cands, const std::set<int>& lengths) {
  std::sort(cands.begin(), cands.end(), simpler);
  CandidateSet out;
  std::vector<std::vector<std::optional<AbstractClause>>> seen;
  for (auto& c : cands) {
    auto key = semantic_key(c.rule, lengths);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));
    out.push_back(std::move(c));
  }
  return out;
}

/// Length-parameterized readings of one encoded example.
///
/// Back-references in seq2 are tried both as absolute indices and relative
/// to the fresh counter. Combinations whose sequence lengths disagree as
/// polynomials in L are dropped before decoding; the rest must decode,
/// validate and obey the length law at L0+1 and L0+2. Throws NoCompression
/// when nothing repeats or no reading survives.
inline CandidateSet generalize_one(const EncodedClause& enc, const std::set<Token>& guards = {}) {
  const int L0 = enc.L0;
  auto clause = decode(enc);
  auto info = detail::arg3_info(clause);

  auto cOrder = compress(enc.order);
  auto cMask = compress(enc.mask);
  auto cSeq1 = compress(enc.seq1);
  auto cSeq2 = compress(enc.seq2);
  if (!detail::has_repetition(cOrder) && !detail::has_repetition(cMask) &&
      !detail::has_repetition(cSeq1) && !detail::has_repetition(cSeq2))
    throw NoCompression();

  std::vector<std::size_t> backrefs;
  for (std::size_t i = 0; i < info.size(); ++i)
    if (!info[i].fresh && !info[i].nil) backrefs.push_back(i);
  const std::size_t styled = std::min<std::size_t>(backrefs.size(), 6);

  std::vector<detail::SeqOption<int>> seq2Opts;
  for (unsigned bits = 0; bits < (1u << styled); ++bits) {
    auto codes = enc.seq2;
    int rel = 0;
    for (std::size_t b = 0; b < styled; ++b) {
      if (!(bits & (1u << b))) continue;
      const auto& in = info[backrefs[b]];
      codes[backrefs[b]] = in.index - in.counter;
      ++rel;
    }
    for (auto& o : detail::count_options(compress(codes), L0)) {
      o.relative = rel;
      seq2Opts.push_back(std::move(o));
    }
  }
  auto orderOpts = detail::count_options(cOrder, L0);
  auto maskOpts = detail::count_options(cMask, L0);
  auto seq1Opts = detail::count_options(cSeq1, L0);
  auto maskBy = detail::by_length(maskOpts);
  auto seq2By = detail::by_length(seq2Opts);
  auto seq1By = detail::by_length(seq1Opts);

  CandidateSet found;
  for (const auto& o : orderOpts) {
    auto mIt = maskBy.find(o.length);
    auto sIt = seq2By.find(o.length);
    if (mIt == maskBy.end() || sIt == seq2By.end()) continue;
    for (const auto* m : mIt->second) {
      std::pair<int, int> want = m->vcount == std::pair<int, int>{0, 0}
                                     ? std::pair<int, int>{0, 0}
                                     : std::pair<int, int>{m->vcount.first, m->vcount.second - 1};
      auto s1It = seq1By.find(want);
      if (s1It == seq1By.end()) continue;
      for (const auto* s2 : sIt->second) {
        for (const auto* s1 : s1It->second) {
          TransductionRule rule;
          rule.order = o.seq;
          rule.mask = m->seq;
          rule.seq2 = s2->seq;
          rule.seq1 = s1->seq;
          rule.base2 = enc.base2;
          rule.delta = enc.delta;
          rule.guards = guards;
          rule.trainingLengths = {L0};
          if (!detail::admissible_at(rule, L0 + 1) || !detail::admissible_at(rule, L0 + 2)) continue;
          rule.minLen = detail::compute_min_len(rule, L0);
          found.push_back({std::move(rule), o.slopes + m->slopes + s2->slopes + s1->slopes, s2->relative});
        }
      }
    }
  }
  if (found.empty()) throw NoCompression();
  return dedup(std::move(found), {L0 + 1, L0 + 2});
}

/// Candidates of `a` that coincide with some candidate of `b` at every test
/// length, deduplicated over those lengths.
inline CandidateSet merge(const CandidateSet& a, const CandidateSet& b, const std::set<int>& testLengths) {
  CandidateSet kept;
  for (const auto& ca : a) {
    auto key = semantic_key(ca.rule, testLengths);
    bool anyValid = std::any_of(key.begin(), key.end(), [](const auto& c) { return c.has_value(); });
    if (!anyValid) continue;
    for (const auto& cb : b) {
      if (semantic_key(cb.rule, testLengths) == key) {
        kept.push_back(ca);
        break;
      }
    }
  }
  if (kept.empty()) throw EmptyIntersection();
  return dedup(std::move(kept), testLengths);
}

// ---------------------------------------------------------------------------
// Learning protocol

struct LearnOutcome {
  enum class Kind { Learned, NeedLongerExample, NeedDifferentLengthExample, Unlearnable };

  Kind kind = Kind::Unlearnable;
  // Set when Learned; also set, restricted to the training length, when
  // asking for an example of another length.
  std::optional<TransductionRule> rule;
  bool lengthRestricted = false;
  std::string reason;
  std::vector<std::string> warnings;
  std::size_t candidates = 0;  // semantic classes that survived

  bool learned() const { return kind == Kind::Learned; }
};

inline std::string state_name(LearnOutcome::Kind k) {
  switch (k) {
    case LearnOutcome::Kind::Learned: return "learned";
    case LearnOutcome::Kind::NeedLongerExample: return "need_longer_example";
    case LearnOutcome::Kind::NeedDifferentLengthExample: return "need_different_length_example";
    case LearnOutcome::Kind::Unlearnable: return "unlearnable";
  }
  return {};
}

namespace detail {

// Rule reproducing one encoding at its own length only.
inline TransductionRule exact_rule(const EncodedClause& enc, const std::set<Token>& guards) {
  auto freeze = [](const auto& seq) {
    using T = typename std::decay_t<decltype(seq)>::value_type;
    GeneralizedSeq<T> g;
    for (const auto& run : compress(seq)) g.push_back({CountExpr::constant(run.count), run.pattern});
    return g;
  };
  TransductionRule r;
  r.seq1 = freeze(enc.seq1);
  r.seq2 = freeze(enc.seq2);
  r.mask = freeze(enc.mask);
  r.order = freeze(enc.order);
  r.base2 = enc.base2;
  r.delta = enc.delta;
  r.minLen = enc.L0;
  r.guards = guards;
  r.trainingLengths = {enc.L0};
  r.lengthRestricted = true;
  return r;
}

inline LearnOutcome outcome(LearnOutcome::Kind kind, std::string reason = {}) {
  LearnOutcome o;
  o.kind = kind;
  o.reason = std::move(reason);
  return o;
}

// Guards: input constants agreed on position by position within each group
// of equal-length examples.
inline std::set<Token> collect_guards(const std::vector<ExamplePair>& examples) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<const ExamplePair*>> groups;
  for (const auto& ex : examples) groups[{ex.input.size(), ex.output.size()}].push_back(&ex);
  std::set<Token> guards;
  for (const auto& [_, members] : groups) {
    if (members.size() < 2) continue;
    std::optional<std::set<Token>> agreed;
    for (std::size_t i = 1; i < members.size(); ++i) {
      auto g = merge_guards(*members[0], *members[i]);
      if (!agreed) {
        agreed = std::move(g);
      } else {
        std::set<Token> both;
        std::set_intersection(agreed->begin(), agreed->end(), g.begin(), g.end(),
                              std::inserter(both, both.end()));
        agreed = std::move(both);
      }
    }
    guards.insert(agreed->begin(), agreed->end());
  }
  return guards;
}

}  // namespace detail

/// Runs the learning pipeline over all examples seen so far.
///
/// Examples of equal length contribute guards; examples of different
/// lengths prune the candidate readings. A single surviving reading is
/// learned. Several readings ask for an example of another length when all
/// examples share one length, except that two or more same-length examples
/// settle for a rule restricted to that length. Positional insertions and
/// deletions that do not generalize are also learned restricted to their
/// length; permutations that do not generalize ask for a longer example.
inline LearnOutcome learn(const std::vector<ExamplePair>& examples) {
  using Kind = LearnOutcome::Kind;
  if (examples.empty()) return detail::outcome(Kind::Unlearnable, "no examples");
  std::vector<std::string> warnings;
  for (const auto& ex : examples) {
    if (ex.input.size() < 2) throw InputTooShort(ex.input.size());
    if (ex.output.empty()) return detail::outcome(Kind::Unlearnable, "empty output");
    for (const auto& t : repeated_tokens(ex))
      warnings.push_back("token '" + t + "' repeats within an example; use pairwise-distinct tokens");
  }
  auto finish = [&](LearnOutcome o) {
    o.warnings = warnings;
    return o;
  };

  std::set<Token> guards;
  try {
    guards = detail::collect_guards(examples);
  } catch (const ShapeMismatch& e) {
    return finish(detail::outcome(Kind::Unlearnable, e.what()));
  }

  std::vector<AbstractClause> clauses;
  std::vector<EncodedClause> encodings;
  std::set<int> lengths, testLengths;
  bool hasConstants = false;
  for (const auto& ex : examples) {
    auto consts = classify_constants(ex);
    hasConstants |= !consts.inputConsts.empty() || !consts.outputConsts.empty();
    std::set<Token> own;
    for (const auto& g : guards)
      if (consts.inputConsts.count(g)) own.insert(g);
    clauses.push_back(abstract_clause(decompose(ex), consts, own));
    int L = static_cast<int>(ex.input.size());
    encodings.push_back(encode(clauses.back(), L));
    lengths.insert(L);
    testLengths.insert({L, L + 1, L + 2});
  }
  const bool sameLength = lengths.size() == 1;

  CandidateSet pool;
  for (const auto& enc : encodings) {
    try {
      auto c = generalize_one(enc, guards);
      pool.insert(pool.end(), c.begin(), c.end());
    } catch (const NoCompression&) {
    } catch (const InvalidEncoding&) {
    }
  }
  CandidateSet consistent;
  for (auto& c : pool) {
    bool fits = true;
    for (std::size_t i = 0; i < clauses.size() && fits; ++i) {
      auto at = try_instantiate(c.rule, encodings[i].L0);
      fits = at && *at == clauses[i];
    }
    if (!fits) continue;
    c.rule.trainingLengths = lengths;
    c.rule.minLen = std::min(c.rule.minLen, *lengths.begin());
    consistent.push_back(std::move(c));
  }
  auto classes = dedup(std::move(consistent), testLengths);

  LearnOutcome out;
  out.candidates = classes.size();
  if (classes.size() == 1 || (!classes.empty() && !sameLength)) {
    out.kind = Kind::Learned;
    out.rule = classes.front().rule;
    return finish(out);
  }
  if (classes.size() > 1) {
    if (examples.size() == 1) {
      out.kind = Kind::NeedDifferentLengthExample;
      out.reason = std::to_string(classes.size()) + " readings agree on this length but not beyond it";
      // Provisional: valid at the training length whichever reading is meant.
      out.rule = classes.front().rule;
      out.rule->lengthRestricted = true;
      out.lengthRestricted = true;
      return finish(out);
    }
    out.kind = Kind::Learned;
    out.lengthRestricted = true;
    out.rule = classes.front().rule;
    out.rule->lengthRestricted = true;
    return finish(out);
  }

  // Nothing generalizes.
  if (!sameLength) return finish(detail::outcome(Kind::Unlearnable, "examples are inconsistent"));
  for (const auto& c : clauses)
    if (c != clauses.front()) return finish(detail::outcome(Kind::Unlearnable, "examples are inconsistent"));
  if (!hasConstants)
    return finish(detail::outcome(Kind::NeedLongerExample, "example too short to generalize"));
  out.kind = Kind::Learned;
  out.lengthRestricted = true;
  out.rule = detail::exact_rule(encodings.front(), guards);
  return finish(out);
}

}  // namespace transduce
