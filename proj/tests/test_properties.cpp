#include <gtest/gtest.h>

#include "support.hpp"

namespace {

const auto& rules() {
  static const auto r = support::corpus_rules();
  return r;
}

}  // namespace

TEST(Property, CorpusYieldsRules) { EXPECT_GE(rules().size(), 30u); }

TEST(Property, CodecRoundTrip) {
  auto c = support::codec_round_trip();
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_GT(c.cases, 2000);
}

TEST(Property, CodecRoundTripOtherSeed) {
  auto c = support::codec_round_trip(1234, 150);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Property, OracleEquivalence) {
  auto c = support::oracle_equivalence(rules());
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_GT(c.cases, 1000);
}

TEST(Property, ConservationAndLengthLaw) {
  auto c = support::conservation_and_length(rules());
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Property, Determinism) {
  auto c = support::determinism();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Property, RandomTasksLearnConsistently) {
  // Whatever learn returns on a random example must reproduce that example.
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    int L = std::uniform_int_distribution<int>(2, 8)(rng);
    auto p = support::random_task(rng, L);
    if (p.output.empty()) continue;
    auto o = transduce::learn({p});
    if (!o.rule) continue;
    auto out = transduce::apply_rule(*o.rule, p.input);
    ASSERT_TRUE(transduce::ok(out)) << transduce::join(p.input, " ") << " -> " << transduce::join(p.output, " ");
    EXPECT_EQ(std::get<transduce::TokenSeq>(out), p.output);
  }
}
