#pragma once

// Run configuration shared by every subcommand. Values come from built-in
// defaults, then an optional JSON config file, then command-line flags; the
// resolved config is written into every output artifact.

#include <cstdint>
#include <string>

#include "json.hpp"

#include "foodqa/benchmark.hpp"
#include "foodqa/foodlog.hpp"
#include "foodqa/personalization.hpp"
#include "foodqa/ranker.hpp"
#include "foodqa/synthetic_kg.hpp"
#include "foodqa/trainer.hpp"

namespace foodqa {

std::string default_data_path(std::string_view relative);

struct RunConfig {
  std::uint64_t seed = 7;
  int threads = 0;  // 0: OpenMP default

  struct Paths {
    std::string kg;
    std::string bench;
    std::string checkpoint;
    std::string embeddings;         // pretrained word vectors
    std::string recipe_embeddings;  // empty: ingredient-mean vectors
    std::string logs;
    std::string out;
    std::string templates = default_data_path("templates.json");
    std::string guidelines = default_data_path("guidelines.json");
    std::string thresholds = default_data_path("thresholds.json");
    std::string diets = default_data_path("diets");
  } paths;

  SyntheticKgConfig kg_gen;
  BenchmarkConfig bench;
  ModelConfig model;
  TrainConfig train;
  FoodLogConfig foodlog;
  Toggles toggles;

  int hops = 2;
  double theta = 0.9;       // base model margin
  double theta_sim = 0.2;   // food-log model margin
  double theta_g = 0.2;     // log-aware gold margin
  double lambda = 0.3;
  std::size_t top_k = 10;   // recipes added by food-log expansion
  std::size_t knn = 10;     // similarity graph degree

  nlohmann::json to_json() const;
  // Overlays the keys present in `j`; unknown keys are DataErrors.
  void merge(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
};

}  // namespace foodqa
