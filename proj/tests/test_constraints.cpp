#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "foodqa/constraints.hpp"
#include "foodqa/error.hpp"
#include "oracles.hpp"

using namespace foodqa;

namespace {

Guideline percent_fat(double lo, double hi) {
  return {"fat", RangeMode::percent_of_calories, lo, hi, "g", 9.0};
}

Guideline grams(std::string nutrient, double lo, double hi) {
  return {std::move(nutrient), RangeMode::absolute_grams, lo, hi, "g", std::nullopt};
}

}  // namespace

TEST(Guideline, AbsoluteRangeIsClosed) {
  const auto g = grams("carbohydrates", 5, 30);
  EXPECT_EQ(g.admits(5, "g", std::nullopt), true);
  EXPECT_EQ(g.admits(30, "g", std::nullopt), true);
  EXPECT_EQ(g.admits(30.0001, "g", std::nullopt), false);
  EXPECT_EQ(g.admits(4.9999, "g", std::nullopt), false);
  EXPECT_EQ(g.admits(12000, "mg", std::nullopt), true);
  EXPECT_EQ(g.admits(12, "kcal", std::nullopt), std::nullopt);
  EXPECT_EQ(g.admits(12, "cups", std::nullopt), std::nullopt);
}

TEST(Guideline, PercentOfCaloriesUsesTheMultiplier) {
  const auto g = percent_fat(0.20, 0.35);
  // 10 g fat * 9 kcal/g = 90 kcal of 300 kcal = 30%.
  EXPECT_EQ(g.admits(10, "g", 300.0), true);
  EXPECT_EQ(g.admits(10, "g", 200.0), false);  // 45%
  EXPECT_EQ(g.admits(10, "g", 450.0), true);   // exactly 20%
  EXPECT_EQ(g.admits(10, "g", 500.0), false);  // 18%
  EXPECT_EQ(g.admits(10, "g", std::nullopt), std::nullopt);
  EXPECT_EQ(g.admits(10, "g", 0.0), std::nullopt);
}

TEST(Guideline, Phrases) {
  EXPECT_EQ(grams("carbohydrates", 5, 30).phrase(), "carbohydrates with desired range 5g to 30g");
  EXPECT_EQ(percent_fat(0.2, 0.35).phrase(), "fat with desired range 20% to 35%");
}

TEST(Guideline, ValidationRejectsBadRanges) {
  EXPECT_THROW(grams("fat", 10, 5).validate(), DataError);
  EXPECT_THROW(grams("fat", -1, 5).validate(), DataError);
  EXPECT_THROW(grams("", 0, 5).validate(), DataError);
  Guideline g = percent_fat(0.2, 0.3);
  g.multiplier.reset();
  EXPECT_THROW(g.validate(), DataError);
  EXPECT_NO_THROW(percent_fat(0.2, 0.3).validate());
}

TEST(Units, Conversions) {
  EXPECT_DOUBLE_EQ(*convert_unit(1500, "mg", "g"), 1.5);
  EXPECT_DOUBLE_EQ(*convert_unit(2, "kg", "g"), 2000);
  EXPECT_NEAR(*convert_unit(418.4, "kJ", "kcal"), 100, 1e-9);
  EXPECT_FALSE(convert_unit(1, "g", "kcal"));
  EXPECT_DOUBLE_EQ(*convert_unit(3, "G", "g"), 3);
}

TEST(Satisfies, AgreesWithBruteForceOnMixedUnits) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto kg = oracle::mixed_unit_kg(seed);
    Rng rng = make_rng(seed, "constraints");
    const auto recipes = kg.entities_of_type(EntityType::recipe);
    std::vector<EntityIndex> all(kg.entities().size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<EntityIndex>(i);
    for (int trial = 0; trial < 50; ++trial) {
      const auto cs = oracle::random_constraints(kg, all, "breakfast", rng);
      for (auto r : recipes)
        for (const auto& c : cs)
          ASSERT_EQ(satisfies(kg, r, c), oracle::satisfies(kg, r, c));
    }
  }
}

TEST(Satisfies, MissingLiteralFailsRangeConstraints) {
  KnowledgeGraph::Builder b;
  const auto r = b.add_entity("r", "plain dish", EntityType::recipe);
  b.add_triple(r, "hasNutrient", b.add_literal(r, 10, "g", "fat"));
  const auto kg = std::move(b).build();
  EXPECT_FALSE(satisfies(kg, r, Constraint::from_guideline(grams("protein", 0, 100))));
  // No calories literal: percent constraints cannot hold.
  EXPECT_FALSE(satisfies(kg, r, Constraint::from_guideline(percent_fat(0, 1))));
  EXPECT_TRUE(satisfies(kg, r, Constraint::from_guideline(grams("fat", 0, 10))));
}

TEST(Thresholds, BandsBecomeQueryConstraints) {
  const auto t = ThresholdTable::load(FOODQA_DATA_DIR "/thresholds.json");
  EXPECT_EQ(t.nutrients(), (std::vector<std::string>{"carbohydrates", "fat", "protein"}));
  const auto c = t.make_constraint("low", "fat");
  EXPECT_EQ(c.kind, ConstraintKind::nutrient_range);
  EXPECT_EQ(c.source, ConstraintSource::query);
  EXPECT_EQ(c.phrase(), "low fat");
  ASSERT_TRUE(c.range);
  EXPECT_EQ(c.range->mode, RangeMode::absolute_grams);
  EXPECT_DOUBLE_EQ(c.range->lo, 0);
  EXPECT_DOUBLE_EQ(c.range->hi, 10);
  EXPECT_THROW(t.make_constraint("tiny", "fat"), DataError);
  EXPECT_THROW(t.make_constraint("low", "sugar"), DataError);
  EXPECT_EQ(ThresholdTable::from_json(t.to_json()).to_json(), t.to_json());
}

TEST(Thresholds, MalformedTablesAreRejected) {
  EXPECT_THROW(ThresholdTable::from_json({{"bands", {{"fat", {{"low", {10, 0}}}}}}}), DataError);
  EXPECT_THROW(ThresholdTable::from_json({{"bands", nlohmann::json::object()}}), DataError);
  EXPECT_THROW(ThresholdTable::load("/nonexistent.json"), DataError);
}

TEST(ConstraintJson, RoundTrip) {
  std::vector<Constraint> cs{Constraint::tag("breakfast"),
                             Constraint::ingredient("bread", true, ConstraintSource::query),
                             Constraint::ingredient("peanut", false, ConstraintSource::preference),
                             Constraint::from_guideline(percent_fat(0.2, 0.35)),
                             ThresholdTable::defaults().make_constraint("high", "protein")};
  for (const auto& c : cs) {
    nlohmann::json j = c;
    EXPECT_EQ(j.get<Constraint>(), c) << j.dump();
  }
}

TEST(Persona, ValidationAndConstraintOrder) {
  Persona p;
  p.likes = {"bread"};
  p.dislikes = {"peanut", "milk"};
  p.guidelines = {grams("carbohydrates", 5, 30)};
  EXPECT_NO_THROW(p.validate());
  const auto cs = p.constraints();
  ASSERT_EQ(cs.size(), 4u);
  EXPECT_EQ(cs[0].kind, ConstraintKind::positive_ingredient);
  EXPECT_EQ(cs[1].kind, ConstraintKind::negative_ingredient);
  EXPECT_EQ(cs[2].subject, "milk");
  EXPECT_EQ(cs[3].source, ConstraintSource::guideline);
  nlohmann::json j = p;
  EXPECT_EQ(j.get<Persona>(), p);

  Persona bad = p;
  bad.dislikes.push_back("bread");
  EXPECT_THROW(bad.validate(), DataError);
  Persona many = p;
  many.guidelines.assign(4, grams("fat", 0, 10));
  EXPECT_THROW(many.validate(), DataError);
}

TEST(Persona, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "foodqa_persona_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "p.json").string();
  {
    std::ofstream(path) << R"({"likes":["bread"],"dislikes":["peanut"],
      "guidelines":[{"nutrient":"fat","mode":"percent-of-calories","lo":0.2,"hi":0.35,"unit":"g","multiplier":9}]})";
  }
  const auto p = load_persona(path);
  EXPECT_EQ(p.likes, std::vector<std::string>{"bread"});
  ASSERT_EQ(p.guidelines.size(), 1u);
  EXPECT_EQ(p.guidelines[0], percent_fat(0.2, 0.35));
  { std::ofstream(path) << "{}"; }
  EXPECT_TRUE(load_persona(path).empty());
  { std::ofstream(path) << "{\"likes\": [1, 2"; }
  EXPECT_THROW(load_persona(path), DataError);
}

TEST(GuidelineTable, ShippedTableIsValid) {
  const auto table = load_guideline_table(FOODQA_DATA_DIR "/guidelines.json");
  EXPECT_EQ(table.size(), 5u);
  for (const auto& g : table) EXPECT_NO_THROW(g.validate());
}
