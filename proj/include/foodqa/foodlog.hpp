#pragma once

// Food-log aware re-ranking: recipe embeddings, the k-NN similarity graph,
// subgraph expansion with log-similar recipes, the combined score and
// log-aware gold sets.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "foodqa/constraints.hpp"
#include "foodqa/kernels.hpp"
#include "foodqa/kg.hpp"
#include "foodqa/ranker.hpp"

namespace foodqa {

struct RecipeEmbeddings {
  std::vector<EntityIndex> recipes;  // row order, sorted by recipe id
  Matrix vectors;
  std::unordered_map<EntityIndex, std::size_t> row_of;

  std::optional<std::size_t> row(EntityIndex recipe) const;
  std::size_t require_row(const KnowledgeGraph& kg, std::string_view recipe_id) const;
};

// `recipe_id v1 ... vd` lines. Unknown ids, ragged dimensions and zero
// vectors are DataErrors.
RecipeEmbeddings load_recipe_embeddings(const std::string& path, const KnowledgeGraph& kg);
void save_recipe_embeddings(const std::string& path, const KnowledgeGraph& kg,
                            const RecipeEmbeddings& emb);
// Mean of the model's word vectors over the recipe's ingredient label tokens.
RecipeEmbeddings ingredient_mean_embeddings(const KnowledgeGraph& kg, const EmbeddingModel& model);
RecipeEmbeddings make_recipe_embeddings(const KnowledgeGraph& kg, std::vector<EntityIndex> recipes,
                                        Matrix vectors);

struct SimilarityGraph {
  std::size_t k = 10;
  std::vector<std::vector<Neighbor>> neighbors;  // per embedding row
};

// Exact k nearest rows by cosine; fewer than k+1 rows gives every other row.
SimilarityGraph build_knn_graph(const RecipeEmbeddings& emb, std::size_t k = 10,
                                bool parallel = true);

struct FoodLog {
  std::string diet_label;
  std::vector<std::string> recipes;  // recipe ids
  std::vector<std::string> terms;    // search terms the log was drawn from
};

std::vector<std::size_t> resolve_log(const KnowledgeGraph& kg, const RecipeEmbeddings& emb,
                                     const FoodLog& log);

// max over log rows of cos(emb[row], emb[r]).
double log_similarity(const RecipeEmbeddings& emb, std::span<const std::size_t> log_rows,
                      std::size_t row);

// The k recipes most similar to the log, drawn from the graph neighbours of
// log members (log members excluded); ties by lowest recipe id.
std::vector<EntityIndex> top_similar_recipes(const RecipeEmbeddings& emb,
                                             const SimilarityGraph& graph,
                                             std::span<const std::size_t> log_rows,
                                             std::size_t k);

// Adds each recipe with its 1-hop neighbourhood; recipes already present are
// left alone.
Subgraph expand_kg_subgraph(const Subgraph& sub, std::span<const EntityIndex> recipes);

// (1 - lambda) * s_qa_norm + lambda * (s_sim + 1) / 2
double combined_score(double s_qa_norm, double s_sim, double lambda);
// Min-max normalization; every entry is 1 when all scores are equal.
std::vector<double> normalize_scores(std::span<const double> scores);

// 1 when every constraint holds, 0.5 when some but not all, 0 when none.
double symbolic_score(const KnowledgeGraph& kg, EntityIndex recipe,
                      std::span<const Constraint> constraints);

struct LogAwareGold {
  std::vector<EntityIndex> recipes;  // selected, best first
  std::vector<EntityIndex> pool;     // R_qa union R_sim
};

LogAwareGold logaware_gold(const Subgraph& sub, std::span<const Constraint> constraints,
                           std::span<const EntityIndex> similar, const RecipeEmbeddings& emb,
                           std::span<const std::size_t> log_rows, double lambda, double theta_g);

struct DietTerms {
  std::string label;
  std::vector<std::string> terms;
};

// One DietTerms per *.txt file (one term per line), ordered by file name.
std::vector<DietTerms> load_diet_terms(const std::string& dir);

struct FoodLogConfig {
  std::size_t logs_per_diet = 6;
  std::size_t terms_per_log = 10;
  double mean_size = 26.0;
  std::size_t min_size = 5;
  std::size_t max_size = 60;

  nlohmann::json to_json() const;
};

std::vector<FoodLog> gen_food_logs(const KnowledgeGraph& kg, std::span<const DietTerms> diets,
                                   const FoodLogConfig& cfg, std::uint64_t seed);

nlohmann::json food_logs_json(std::span<const FoodLog> logs);
void write_food_logs(const std::string& path, std::span<const FoodLog> logs);
// Accepts an array of logs or a single log object.
std::vector<FoodLog> read_food_logs(const std::string& path);

}  // namespace foodqa
