#include <gtest/gtest.h>

#include "foodqa/rng.hpp"
#include "foodqa/text.hpp"

using namespace foodqa;

TEST(Tokenize, LowercasesAndDropsPunctuation) {
  EXPECT_EQ(tokenize("Suggest a Breakfast, that contains bread?"),
            (std::vector<std::string>{"suggest", "a", "breakfast", "that", "contains", "bread"}));
}

TEST(Tokenize, KeepsNumbersUnitsAndApostrophes) {
  EXPECT_EQ(tokenize("fat 20% to 35%, carbs 5g or 12.5 g; don't"),
            (std::vector<std::string>{"fat", "20%", "to", "35%", "carbs", "5g", "or", "12.5", "g",
                                      "don't"}));
}

TEST(Tokenize, MarksPunctuationBreaks) {
  const auto toks = tokenize_with_breaks("without eggs, and milk");
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_FALSE(toks[1].break_before);
  EXPECT_TRUE(toks[2].break_before);
}

TEST(Tokenize, EmptyAndPunctuationOnly) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ?!, ").empty());
}

TEST(ContainsTokens, MatchesWholeTokenRunsOnly) {
  const std::vector<std::string> h{"whole", "wheat", "bread"};
  EXPECT_TRUE(contains_tokens(h, {"bread"}));
  EXPECT_TRUE(contains_tokens(h, {"wheat", "bread"}));
  EXPECT_FALSE(contains_tokens(h, {"whole", "bread"}));
  EXPECT_FALSE(contains_tokens(h, {"rea"}));
  EXPECT_FALSE(contains_tokens(h, {}));
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(5), "5");
  EXPECT_EQ(format_number(12.5), "12.5");
  EXPECT_EQ(format_number(0.35), "0.35");
  EXPECT_EQ(format_number(-3), "-3");
  Rng rng = make_rng(1, "format");
  for (int i = 0; i < 1000; ++i) {
    const double v = uniform_real(rng, -1e4, 1e4);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(EditDistance, Basics) {
  EXPECT_EQ(edit_distance("", ""), 0u);
  EXPECT_EQ(edit_distance("abc", ""), 3u);
  EXPECT_EQ(edit_distance("brekfast", "breakfast"), 1u);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
}

TEST(Rng, DerivedStreamsAreIndependentOfCallOrder) {
  Rng a = make_rng(7, "stream", 3);
  Rng b = make_rng(7, "stream", 3);
  Rng c = make_rng(7, "stream", 4);
  EXPECT_EQ(a(), b());
  EXPECT_NE(make_rng(7, "stream", 3)(), c());
  EXPECT_NE(derive_seed(7, "a"), derive_seed(7, "b"));
  EXPECT_NE(derive_seed(7, "a", 0, 0), derive_seed(7, "a", 0, 1));
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
  Rng rng = make_rng(11, "uniform");
  std::vector<int> counts(7);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[uniform_index(rng, 7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7, 400);
  EXPECT_EQ(uniform_index(rng, 1), 0u);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform_real(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
