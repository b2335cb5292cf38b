#include "foodqa/synthetic_kg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "foodqa/rng.hpp"

namespace foodqa {

namespace {

// Ordered roughly by how common the ingredient is.
constexpr std::string_view kIngredients[] = {
    "salt", "olive oil", "garlic", "onions", "butter", "eggs", "sugar",
    "flour", "black pepper", "tomatoes", "milk", "lemon juice", "water",
    "ginger", "cumin", "chicken breast", "rice", "bread", "cheddar cheese",
    "carrots", "honey", "basil", "parsley", "cilantro", "soy sauce",
    "red peppers", "mushrooms", "spinach", "potatoes", "chickpeas", "lentils",
    "coconut milk", "yogurt", "bacon", "avocado", "peanuts", "sesame",
    "oregano", "turmeric", "cinnamon", "vanilla", "heavy cream", "cream cheese",
    "feta cheese", "cucumber", "eggplant", "zucchini", "broccoli",
    "cauliflower", "tofu", "quinoa", "oats", "almonds", "walnuts", "salmon",
    "shrimp", "lean ground beef", "pork belly", "black beans", "kale",
    "sweet potato", "orange", "banana", "berries", "apples", "olives",
    "paneer", "garam masala", "curry powder", "basmati rice", "brown rice",
    "canned milk", "white wine vinegar", "ketchup", "mustard", "mayonnaise",
    "parmesan", "mozzarella", "pasta", "noodles", "corn", "peas", "celery",
    "lime", "chili flakes", "maple syrup", "cocoa", "gelatin", "pecans",
    "green beans", "cabbage", "leeks", "pumpkin", "dates", "raisins",
    "coconut oil", "tahini", "pine nuts", "capers", "anchovies"};

constexpr std::string_view kTags[] = {
    "indian", "mediterranean", "breakfast", "jellies", "turkish",
    "russian", "egyptian", "dinner party", "brunch", "desserts",
    "thai", "mexican", "italian", "greek", "chinese",
    "japanese", "french", "spanish", "korean", "moroccan",
    "lebanese", "cajun", "caribbean", "vegetarian", "grilling",
    "baking", "soups", "salads", "snacks", "holiday"};

constexpr std::string_view kDishes[] = {
    "curry", "salad", "soup", "stew", "bowl", "pasta", "tacos",
    "casserole", "skillet", "bake", "stir fry", "wraps", "burger",
    "pie", "muffins", "pancakes", "smoothie", "dal", "tikka", "risotto"};

std::string slug(std::string_view label) {
  std::string s(label);
  std::replace(s.begin(), s.end(), ' ', '_');
  return s;
}

std::string padded(std::size_t i, std::size_t width) {
  std::string s = std::to_string(i);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

KnowledgeGraph gen_synthetic_kg(const SyntheticKgConfig& cfg) {
  if (cfg.n_recipes < 1 || cfg.n_tags < 1 || cfg.ingredient_pool_size < 3) {
    throw std::invalid_argument(
        "synthetic kg needs >=1 recipe, >=1 tag, >=3 ingredients");
  }
  Rng rng = make_rng(cfg.seed, "synthetic-kg");
  KnowledgeGraph::Builder b;

  std::vector<EntityIndex> tags;
  constexpr std::size_t n_base_tags = std::size(kTags);
  for (std::size_t t = 0; t < cfg.n_tags; ++t) {
    std::string label(kTags[t % n_base_tags]);
    if (t >= n_base_tags) label += " " + std::to_string(t / n_base_tags + 1);
    tags.push_back(b.add_entity("tag/" + slug(label), label, EntityType::tag));
  }

  std::vector<EntityIndex> ingredients;
  std::vector<std::string> ingredient_labels;
  std::vector<double> weights;
  constexpr std::size_t n_base_ingr = std::size(kIngredients);
  for (std::size_t i = 0; i < cfg.ingredient_pool_size; ++i) {
    std::string label(kIngredients[i % n_base_ingr]);
    if (i >= n_base_ingr) label += " " + std::to_string(i / n_base_ingr + 1);
    ingredients.push_back(b.add_entity("ingredient/" + slug(label), label,
                                       EntityType::ingredient));
    ingredient_labels.push_back(label);
    weights.push_back(1.0 / std::pow(static_cast<double>(i) + 3.0, 0.8));
  }

  // Tag assignment: resample until every tag owns a recipe.
  std::vector<std::vector<std::size_t>> recipe_tags;
  for (int attempt = 0;; ++attempt) {
    recipe_tags.assign(cfg.n_recipes, {});
    std::vector<bool> covered(cfg.n_tags, false);
    for (auto& rt : recipe_tags) {
      const std::size_t n = (cfg.n_tags > 1 && uniform_real(rng) < 0.3) ? 2 : 1;
      while (rt.size() < n) {
        const std::size_t t = uniform_index(rng, cfg.n_tags);
        if (std::find(rt.begin(), rt.end(), t) == rt.end()) rt.push_back(t);
      }
      for (auto t : rt) covered[t] = true;
    }
    if (std::all_of(covered.begin(), covered.end(), [](bool c) { return c; })) {
      break;
    }
    if (attempt >= 200) {
      // Too few recipes to cover by chance: hand out uncovered tags in turn.
      std::size_t r = 0;
      for (std::size_t t = 0; t < cfg.n_tags; ++t) {
        if (covered[t]) continue;
        recipe_tags[r % cfg.n_recipes].push_back(t);
        ++r;
      }
      break;
    }
  }

  const std::size_t width = std::to_string(cfg.n_recipes).size() + 1;
  for (std::size_t r = 0; r < cfg.n_recipes; ++r) {
    // Ingredients: weighted sampling without replacement.
    const std::size_t n_ingr =
        std::min<std::size_t>(3 + uniform_index(rng, 8), ingredients.size());
    std::vector<std::size_t> chosen;
    std::vector<double> w = weights;
    for (std::size_t k = 0; k < n_ingr; ++k) {
      double total = 0;
      for (double x : w) total += x;
      double pick = uniform_real(rng) * total;
      std::size_t i = 0;
      for (; i + 1 < w.size(); ++i) {
        if (pick < w[i]) break;
        pick -= w[i];
      }
      chosen.push_back(i);
      w[i] = 0.0;
    }
    // Name from one or two of the less common ingredients plus a dish noun.
    std::vector<std::size_t> by_rarity = chosen;
    std::sort(by_rarity.rbegin(), by_rarity.rend());
    std::string name = ingredient_labels[by_rarity[0]];
    if (by_rarity.size() > 1 && uniform_real(rng) < 0.5) {
      name += " and " + ingredient_labels[by_rarity[1]];
    }
    name += " " + std::string(kDishes[uniform_index(rng, std::size(kDishes))]);

    const EntityIndex recipe = b.add_entity(
        "recipe/" + padded(r + 1, width), name, EntityType::recipe);
    for (auto t : recipe_tags[r]) b.add_triple(recipe, predicates::has_tag, tags[t]);
    for (auto i : chosen) {
      b.add_triple(recipe, predicates::has_ingredient, ingredients[i]);
    }
    const double fat = round1(uniform_real(rng, 1.0, 45.0));
    const double protein = round1(uniform_real(rng, 2.0, 50.0));
    const double carbs = round1(uniform_real(rng, 3.0, 100.0));
    const double calories =
        round1(9.0 * fat + 4.0 * protein + 4.0 * carbs + uniform_real(rng, 0, 40));
    const std::pair<std::string_view, double> facts[] = {
        {nutrients::fat, fat},
        {nutrients::protein, protein},
        {nutrients::carbohydrates, carbs},
        {nutrients::calories, calories}};
    for (const auto& [nutrient, value] : facts) {
      const std::string unit = nutrient == nutrients::calories ? "kcal" : "g";
      const EntityIndex lit =
          b.add_literal(recipe, value, unit, std::string(nutrient));
      b.add_triple(recipe, predicates::has_nutrient, lit);
    }
  }
  return std::move(b).build();
}

}  // namespace foodqa
