#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "checks.hpp"
#include "foodqa/error.hpp"
#include "foodqa/foodlog.hpp"
#include "foodqa/synthetic_kg.hpp"
#include "oracles.hpp"

using namespace foodqa;
namespace fs = std::filesystem;

namespace {

KnowledgeGraph tiny_kg() {
  std::istringstream in(
      "#entity\tr/a\tavocado toast\trecipe\n"
      "#entity\tr/b\tbacon salad\trecipe\n"
      "#entity\tr/c\tfeta salad\trecipe\n"
      "#entity\tr/d\tkale bowl\trecipe\n"
      "#entity\tr/e\tpineapple cake\trecipe\n"
      "r/a\thasTag\ttag/lunch\n"
      "r/b\thasTag\ttag/lunch\n"
      "r/c\thasTag\ttag/lunch\n"
      "r/d\thasTag\ttag/dinner\n"
      "r/e\thasTag\ttag/dinner\n"
      "r/a\thasIngredient\tingredient/avocado\n"
      "r/b\thasIngredient\tingredient/bacon\n"
      "r/c\thasIngredient\tingredient/feta\n"
      "r/d\thasIngredient\tingredient/kale\n"
      "r/e\thasIngredient\tingredient/apple\n"
      "r/a\thasNutrient\t\"12 g\"\tfat\n"
      "r/b\thasNutrient\t\"30 g\"\tfat\n"
      "r/c\thasNutrient\t\"8 g\"\tfat\n"
      "r/d\thasNutrient\t\"4 g\"\tfat\n"
      "r/e\thasNutrient\t\"15 g\"\tfat\n");
  return parse_kg(in);
}

RecipeEmbeddings tiny_embeddings(const KnowledgeGraph& kg) {
  // rows follow recipe ids a..e
  Matrix v(5, 2);
  const double xs[5][2] = {{1, 0}, {0.9, 0.1}, {0.6, 0.8}, {0, 1}, {-1, 0.05}};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 2; ++k) v.at(i, k) = xs[i][k];
  std::vector<EntityIndex> rs;
  for (auto id : {"r/a", "r/b", "r/c", "r/d", "r/e"}) rs.push_back(kg.require(id));
  return make_recipe_embeddings(kg, rs, v);
}

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("foodqa_foodlog_" + name)).string();
}

}  // namespace

TEST(CombinedScore, RangeAndEndpointOrderings) {
  const auto r = checks::combined_score_properties(10000, 21);
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(CombinedScore, KnownValues) {
  EXPECT_DOUBLE_EQ(combined_score(1.0, 1.0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(combined_score(0.0, -1.0, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(combined_score(0.5, 0.0, 0.3), 0.7 * 0.5 + 0.3 * 0.5);
  EXPECT_DOUBLE_EQ(combined_score(0.2, 0.6, 0.0), 0.2);
  EXPECT_DOUBLE_EQ(combined_score(0.2, 0.6, 1.0), 0.8);
}

TEST(NormalizeScores, MinMaxAndDegenerate) {
  const std::vector<double> s{2.0, -1.0, 0.5};
  const auto n = normalize_scores(s);
  EXPECT_DOUBLE_EQ(n[0], 1.0);
  EXPECT_DOUBLE_EQ(n[1], 0.0);
  EXPECT_DOUBLE_EQ(n[2], 0.5);
  const std::vector<double> flat{3.0, 3.0};
  EXPECT_EQ(normalize_scores(flat), (std::vector<double>{1.0, 1.0}));
  EXPECT_TRUE(normalize_scores(std::vector<double>{}).empty());
}

TEST(SymbolicScore, AllSomeNone) {
  const auto kg = tiny_kg();
  const Guideline low_fat{"fat", RangeMode::absolute_grams, 0, 10, "g", std::nullopt};
  const std::vector<Constraint> cs{Constraint::ingredient("feta", true, ConstraintSource::query),
                                   Constraint::from_guideline(low_fat)};
  EXPECT_EQ(symbolic_score(kg, kg.require("r/c"), cs), 1.0);
  EXPECT_EQ(symbolic_score(kg, kg.require("r/d"), cs), 0.5);
  EXPECT_EQ(symbolic_score(kg, kg.require("r/b"), cs), 0.0);
  // Ingredient matching looks at ingredient nodes, not the recipe name.
  const Constraint apple[] = {Constraint::ingredient("apple", true, ConstraintSource::query)};
  EXPECT_EQ(symbolic_score(kg, kg.require("r/e"), apple), 1.0);
}

TEST(RecipeEmbeddings, FileRoundTripAndErrors) {
  const auto kg = tiny_kg();
  const auto emb = tiny_embeddings(kg);
  const auto path = temp_path("emb.txt");
  save_recipe_embeddings(path, kg, emb);
  const auto back = load_recipe_embeddings(path, kg);
  EXPECT_EQ(back.vectors, emb.vectors);
  EXPECT_EQ(back.recipes, emb.recipes);
  EXPECT_EQ(back.require_row(kg, "r/c"), 2u);
  EXPECT_THROW(back.require_row(kg, "r/zzz"), DataError);

  auto expect_error = [&](const std::string& body) {
    std::ofstream(path) << body;
    EXPECT_THROW(load_recipe_embeddings(path, kg), DataError) << body;
  };
  expect_error("r/a 1 0\nr/b 1\n");
  expect_error("r/nope 1 0\n");
  expect_error("r/a 0 0\n");
  expect_error("r/a 1 x\n");
  EXPECT_THROW(load_recipe_embeddings(temp_path("missing"), kg), DataError);
  fs::remove(path);
}

TEST(KnnGraph, SerialAndParallelAgree) {
  const auto kg = gen_synthetic_kg({150, 6, 30, 3});
  EmbeddingModel m;
  m.config = ModelConfig{8, 4, 0.5};
  for (const auto& e : kg.entities())
    for (const auto& w : tokenize(e.label)) m.vocab.add_word(w);
  m.initialize(3);
  const auto emb = ingredient_mean_embeddings(kg, m);
  EXPECT_EQ(emb.recipes.size(), 150u);
  const auto a = build_knn_graph(emb, 10, false), b = build_knn_graph(emb, 10, true);
  EXPECT_EQ(a.neighbors, b.neighbors);
  for (const auto& n : a.neighbors) EXPECT_EQ(n.size(), 10u);
  const auto small = build_knn_graph(tiny_embeddings(tiny_kg()), 10);
  for (const auto& n : small.neighbors) EXPECT_EQ(n.size(), 4u);
}

TEST(TopSimilar, MatchesReference) {
  const auto kg = gen_synthetic_kg({120, 5, 30, 9});
  Rng rng = make_rng(9, "emb");
  Matrix v(120, 6);
  for (double& x : v.data()) x = uniform_real(rng) - 0.5;
  auto recipes = kg.entities_of_type(EntityType::recipe);
  std::sort(recipes.begin(), recipes.end(),
            [&](auto a, auto b) { return kg.entity(a).id < kg.entity(b).id; });
  const auto emb = make_recipe_embeddings(kg, recipes, v);
  const auto graph = build_knn_graph(emb, 10);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<std::size_t> log_set;
    while (log_set.size() < 6) log_set.insert(uniform_index(rng, 120));
    const std::vector<std::size_t> log(log_set.begin(), log_set.end());
    std::set<std::size_t> pool;
    for (auto r : log)
      for (const auto& n : graph.neighbors[r])
        if (!log_set.contains(n.row)) pool.insert(n.row);
    std::vector<std::pair<double, std::string>> ranked;
    for (auto r : pool) {
      double best = -2;
      for (auto l : log) best = std::max(best, cosine(emb.vectors.row(l), emb.vectors.row(r)));
      ranked.push_back({-best, kg.entity(emb.recipes[r]).id});
    }
    std::sort(ranked.begin(), ranked.end());
    const auto got = top_similar_recipes(emb, graph, log, 10);
    ASSERT_EQ(got.size(), std::min<std::size_t>(10, ranked.size()));
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(kg.entity(got[i]).id, ranked[i].second);
  }
}

TEST(ExpandSubgraph, AddsRecipesWithOneHop) {
  const auto kg = tiny_kg();
  const auto sub = extract_subgraph(kg, kg.require("tag/lunch"), 2);
  EXPECT_FALSE(sub.contains(kg.require("r/d")));
  const EntityIndex add[] = {kg.require("r/d"), kg.require("r/a")};
  const auto ex = expand_kg_subgraph(sub, add);
  EXPECT_TRUE(ex.contains(kg.require("r/d")));
  EXPECT_TRUE(ex.contains(kg.require("ingredient/kale")));
  EXPECT_TRUE(ex.contains(kg.require("r/d#fat")));
  EXPECT_TRUE(ex.contains(kg.require("tag/dinner")));
  // r/e is a 2-hop neighbour of r/d only through tag/dinner.
  EXPECT_FALSE(ex.contains(kg.require("r/e")));
  EXPECT_EQ(enumerate_candidates(ex).size(), 4u);
}

TEST(LogAwareGold, MatchesReference) {
  const auto kg = tiny_kg();
  const auto emb = tiny_embeddings(kg);
  const auto sub = extract_subgraph(kg, kg.require("tag/lunch"), 2);
  const Guideline low_fat{"fat", RangeMode::absolute_grams, 0, 10, "g", std::nullopt};
  const std::vector<Constraint> cs{Constraint::tag("lunch"), Constraint::from_guideline(low_fat)};
  const std::vector<std::size_t> log{3};  // kale bowl
  const EntityIndex similar[] = {kg.require("r/d")};
  for (double lambda : {0.0, 0.3, 0.9}) {
    for (double theta : {0.0, 0.2, 1.0}) {
      const auto g = logaware_gold(sub, cs, similar, emb, log, lambda, theta);
      // Reference: pool = oracle gold plus similar; score each, keep the margin.
      std::vector<std::string> pool_ids;
      for (const auto& id : oracle::gold(kg, sub.entities(), cs)) pool_ids.push_back(id);
      pool_ids.push_back("r/d");
      std::vector<std::pair<double, std::string>> scored;
      for (const auto& id : pool_ids) {
        const auto r = kg.require(id);
        const double sym = symbolic_score(kg, r, cs);
        const double sim = cosine(emb.vectors.row(*emb.row(r)), emb.vectors.row(3));
        scored.push_back({(1 - lambda) * sym + lambda * (sim + 1) / 2, id});
      }
      std::sort(scored.begin(), scored.end(), [](auto& a, auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      std::vector<std::string> expect;
      for (const auto& [s, id] : scored)
        if (scored.front().first - s <= theta) expect.push_back(id);
      std::vector<std::string> got;
      for (auto r : g.recipes) got.push_back(kg.entity(r).id);
      EXPECT_EQ(got, expect) << lambda << " " << theta;
      EXPECT_EQ(g.pool.size(), pool_ids.size());
    }
  }
}

TEST(FoodLogs, GenerationRespectsSizeAndTerms) {
  const auto kg = gen_synthetic_kg({600, 20, 90, 7});
  const auto diets = load_diet_terms(FOODQA_DATA_DIR "/diets");
  ASSERT_EQ(diets.size(), 5u);
  FoodLogConfig cfg;
  const auto logs = gen_food_logs(kg, diets, cfg, 7);
  ASSERT_FALSE(logs.empty());
  for (const auto& log : logs) {
    EXPECT_LE(log.recipes.size(), cfg.max_size);
    EXPECT_LE(log.terms.size(), cfg.terms_per_log);
    std::set<std::string> uniq(log.recipes.begin(), log.recipes.end());
    EXPECT_EQ(uniq.size(), log.recipes.size());
    for (const auto& id : log.recipes) {
      const auto name = tokenize(kg.entity(kg.require(id)).label);
      bool hit = false;
      for (const auto& t : log.terms) hit = hit || contains_tokens(name, tokenize(t));
      EXPECT_TRUE(hit) << id << " in a " << log.diet_label << " log";
    }
  }
  // Reproducible, and seed-sensitive.
  EXPECT_EQ(food_logs_json(gen_food_logs(kg, diets, cfg, 7)), food_logs_json(logs));
  EXPECT_NE(food_logs_json(gen_food_logs(kg, diets, cfg, 8)), food_logs_json(logs));
}

TEST(FoodLogs, SizesFollowTheClampedPoisson) {
  // Labels come from ids ("0", "1", ...); one term per recipe gives a pool of 300.
  std::ostringstream tsv;
  for (int i = 0; i < 300; ++i) tsv << "r/" << i << "\thasTag\ttag/x\n";
  std::istringstream in(tsv.str());
  const auto kg = parse_kg(in);
  FoodLogConfig cfg;
  cfg.logs_per_diet = 1;
  cfg.mean_size = 2;  // small mean: the lower clamp must kick in
  std::vector<DietTerms> one{{"all", {}}};
  for (int i = 0; i < 300; ++i) one[0].terms.push_back(std::to_string(i));
  cfg.terms_per_log = 300;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto logs = gen_food_logs(kg, one, cfg, s);
    ASSERT_EQ(logs.size(), 1u);
    EXPECT_GE(logs[0].recipes.size(), 5u);
  }
  cfg.mean_size = 200;
  for (std::uint64_t s = 0; s < 30; ++s) {
    EXPECT_EQ(gen_food_logs(kg, one, cfg, s)[0].recipes.size(), 60u);
  }
}

TEST(FoodLogs, JsonRoundTrip) {
  const std::vector<FoodLog> logs{{"keto", {"r/a", "r/b"}, {"bacon"}}};
  const auto path = temp_path("logs.json");
  write_food_logs(path, logs);
  const auto back = read_food_logs(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].recipes, logs[0].recipes);
  EXPECT_EQ(back[0].diet_label, "keto");
  std::ofstream(path) << R"({"diet_label":"x","recipes":["r/a"],"terms":[]})";
  EXPECT_EQ(read_food_logs(path).size(), 1u);
  std::ofstream(path) << R"({"recipes": 3})";
  EXPECT_THROW(read_food_logs(path), DataError);
  fs::remove(path);
}

TEST(FoodLogs, ResolveAndSimilarity) {
  const auto kg = tiny_kg();
  const auto emb = tiny_embeddings(kg);
  const FoodLog log{"x", {"r/d", "r/a"}, {}};
  const auto rows = resolve_log(kg, emb, log);
  EXPECT_EQ(rows, (std::vector<std::size_t>{3, 0}));
  EXPECT_DOUBLE_EQ(log_similarity(emb, rows, 2), 0.8);
  EXPECT_THROW(resolve_log(kg, emb, FoodLog{"x", {"r/q"}, {}}), DataError);
}
