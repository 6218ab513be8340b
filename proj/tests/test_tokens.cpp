#include <gtest/gtest.h>

#include "transduce/tokens.hpp"

using namespace transduce;

TEST(Tokenize, SymbolsSplitsPunctuation) {
  EXPECT_EQ(tokenize("john.doe@gmail.com", TokenizerMode::symbols()),
            (TokenSeq{"john", ".", "doe", "@", "gmail", ".", "com"}));
}

TEST(Tokenize, SymbolsWhitespaceAndRuns) {
  EXPECT_EQ(tokenize("  (555) 123-4567 ", TokenizerMode::symbols()),
            (TokenSeq{"(", "555", ")", "123", "-", "4567"}));
  EXPECT_EQ(tokenize("café au", TokenizerMode::symbols()), (TokenSeq{"café", "au"}));
}

TEST(Tokenize, CharsOnePerCodePoint) {
  EXPECT_EQ(tokenize("abc", TokenizerMode::chars()), (TokenSeq{"a", "b", "c"}));
  EXPECT_EQ(tokenize("né", TokenizerMode::chars()), (TokenSeq{"n", "é"}));
}

TEST(Tokenize, EmptyInput) {
  EXPECT_TRUE(tokenize("", TokenizerMode::symbols()).empty());
  EXPECT_TRUE(tokenize("", TokenizerMode::chars()).empty());
  EXPECT_TRUE(tokenize("", TokenizerMode::delimited(",")).empty());
}

TEST(Tokenize, DelimitedDropsEmptyFields) {
  EXPECT_EQ(tokenize("a,,b,c,", TokenizerMode::delimited(",")), (TokenSeq{"a", "b", "c"}));
  EXPECT_EQ(tokenize("x  y", TokenizerMode::delimited(" ")), (TokenSeq{"x", "y"}));
  EXPECT_EQ(tokenize("a::b", TokenizerMode::delimited("::")), (TokenSeq{"a", "b"}));
}

TEST(Detokenize, PerMode) {
  EXPECT_EQ(detokenize({"a", "b", "c"}, TokenizerMode::chars()), "abc");
  EXPECT_EQ(detokenize({"x", "y"}, TokenizerMode::symbols()), "x y");
  EXPECT_EQ(detokenize({}, TokenizerMode::chars()), "");
  EXPECT_EQ(detokenize({"a", "b"}, TokenizerMode::delimited(";")), "a;b");
}

TEST(SplitWords, Whitespace) {
  EXPECT_EQ(split_words(" a\tb  c "), (TokenSeq{"a", "b", "c"}));
  EXPECT_TRUE(split_words("   ").empty());
}
