#pragma once

// Evaluation harness: per-question metrics, macro aggregation, the ablation
// matrix and the food-log comparison, plus result writers.

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "foodqa/benchmark.hpp"
#include "foodqa/foodlog.hpp"
#include "foodqa/metrics.hpp"
#include "foodqa/pipeline.hpp"

namespace foodqa {

struct QuestionResult {
  std::string id;
  std::vector<std::string> gold;       // sorted
  std::vector<std::string> predicted;  // ranked
  std::vector<double> scores;          // score of each predicted answer
  PRF prf;
  APAR apar;
  bool skipped = false;
};

struct EvalResult {
  std::string label;
  std::string split;
  double map = 0, mar = 0, f1 = 0, precision = 0, recall = 0;
  std::size_t questions = 0;
  std::size_t skipped = 0;
  std::vector<QuestionResult> per_question;
};

QuestionResult score_question(std::string id, const std::set<std::string>& gold,
                              std::vector<ScoredAnswer> predicted);
// Unweighted means over every question (skipped ones count as zero).
EvalResult aggregate(std::string label, std::string split, std::vector<QuestionResult> questions);

struct EvalOptions {
  Toggles toggles;
  double theta = 0.9;
  int hops = 2;
};

EvalResult evaluate(const EmbeddingModel& model, const KnowledgeGraph& kg,
                    std::span<const BenchmarkExample> examples, const EvalOptions& options,
                    std::string label, std::string split);

struct RecipeSimOptions {
  double lambda = 0.3;
  double theta_base = 0.9;
  double theta_sim = 0.2;
  double theta_g = 0.2;
  std::size_t top_k = 10;
  int hops = 2;
  std::uint64_t seed = 7;  // picks a log per question when several are given
};

struct RecipeSimComparison {
  EvalResult base;
  EvalResult recipesim;
  double avg_gold = 0;       // log-aware gold size
  double avg_added = 0;      // recipes added by expansion
};

// Both systems use the same (full-toggle) model and are scored against
// log-aware gold sets.
RecipeSimComparison evaluate_recipesim(const EmbeddingModel& model, const KnowledgeGraph& kg,
                                       std::span<const BenchmarkExample> examples,
                                       const RecipeEmbeddings& emb, const SimilarityGraph& graph,
                                       std::span<const FoodLog> logs,
                                       const RecipeSimOptions& options);

std::string results_table(std::span<const EvalResult> results);
void write_results_csv(const std::string& path, std::span<const EvalResult> results);
void write_per_question_jsonl(const std::string& path, const EvalResult& result);

}  // namespace foodqa
