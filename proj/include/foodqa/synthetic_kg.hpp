#pragma once

#include <cstdint>

#include "foodqa/kg.hpp"

namespace foodqa {

namespace nutrients {
inline constexpr std::string_view fat = "fat";
inline constexpr std::string_view protein = "protein";
inline constexpr std::string_view carbohydrates = "carbohydrates";
inline constexpr std::string_view calories = "calories";
}  // namespace nutrients

struct SyntheticKgConfig {
  std::size_t n_recipes = 600;
  std::size_t n_tags = 20;
  std::size_t ingredient_pool_size = 90;
  std::uint64_t seed = 7;
};

// Desk-scale stand-in for a recipe KG. Every recipe gets 1-2 tags, 3-10
// ingredients drawn with a Zipf-like popularity skew, and fat / protein /
// carbohydrates (g) and calories (kcal) literals with
// calories >= 9 kcal/g * fat. Every tag is guaranteed at least one recipe.
KnowledgeGraph gen_synthetic_kg(const SyntheticKgConfig& config);

}  // namespace foodqa
