#pragma once

// Glue between the benchmark, the personalization steps and the ranker:
// turns a benchmark example into model inputs under a set of toggles.

#include <set>
#include <string>
#include <vector>

#include "foodqa/benchmark.hpp"
#include "foodqa/personalization.hpp"
#include "foodqa/ranker.hpp"
#include "foodqa/trainer.hpp"

namespace foodqa {

struct PreparedExample {
  std::string id;
  ExpandedQuery query;  // model input after the toggles
  std::vector<Constraint> constraints;  // what KA and CM were given
  std::vector<CandidateAnswer> candidates;
  std::vector<std::string> candidate_ids;
  std::set<std::string> gold;
};

EntityIndex resolve_topic(const KnowledgeGraph& kg, std::string_view tag_label);

// With QE off the persona never reaches the model: the raw query is used
// with padding markups and only query constraints feed KA and CM.
ExpandedQuery model_query(const BenchmarkExample& ex, const Toggles& toggles);

// Augments (KA), enumerates candidates and applies markups (CM) on `sub`.
PreparedExample prepare_on_subgraph(const BenchmarkExample& ex, const Subgraph& sub,
                                    const Toggles& toggles, std::set<std::string> gold);
PreparedExample prepare_example(const KnowledgeGraph& kg, const BenchmarkExample& ex,
                                const Toggles& toggles, int hops = 2);

void extend_vocabulary(Vocabulary& vocab, const PreparedExample& ex);
TrainingExample to_training_example(const Vocabulary& vocab, const PreparedExample& ex);

// Scores every candidate; ranked by descending score, ties by lowest id.
std::vector<ScoredAnswer> score_candidates(const EmbeddingModel& model, const PreparedExample& ex,
                                           bool parallel = false,
                                           const Encoder& encoder = default_encoder());

struct TrainedModel {
  EmbeddingModel model;
  OptimizerState optimizer;
  TrainReport report;
};

// Builds the vocabulary from the training inputs, initializes the tables
// (optionally from pretrained word vectors) and trains.
TrainedModel train_model(const KnowledgeGraph& kg, std::span<const BenchmarkExample> train,
                         const Toggles& toggles, const ModelConfig& model_config,
                         const TrainConfig& train_config, int hops = 2,
                         const std::string& pretrained_path = "");

// Free-text query understanding for ad-hoc questions: the topic tag is the
// longest tag label found in the query; ingredient labels become positive
// or negative constraints depending on negation scope; "low fat" style
// phrases become nutrient limits.
struct ParsedQuery {
  std::optional<EntityIndex> topic;
  std::string suggestion;  // closest tag label when no topic was found
  std::vector<Constraint> constraints;
};
ParsedQuery parse_query(const KnowledgeGraph& kg, const ThresholdTable& thresholds,
                        std::string_view raw);

}  // namespace foodqa
