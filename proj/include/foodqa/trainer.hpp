#pragma once

// Triplet hinge-loss training with negative sampling and a from-scratch Adam
// optimizer.

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "foodqa/ranker.hpp"
#include "foodqa/rng.hpp"

namespace foodqa {

struct TrainingExample {
  IndexedQuery query;
  std::vector<IndexedAnswer> candidates;
  std::vector<std::size_t> positives;  // gold candidate indices
  std::vector<std::size_t> negatives;  // non-gold candidate indices
};

struct Triplet {
  std::size_t example = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

struct TrainConfig {
  std::size_t epochs = 20;
  double lr = 0.005;
  std::size_t batch = 32;
  std::size_t negatives = 5;  // per positive
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 7;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j, TrainConfig base);
};

struct TrainReport {
  std::vector<double> step_loss;   // mean hinge per triplet
  std::vector<double> epoch_loss;
  std::size_t steps = 0;
  std::size_t skipped = 0;  // examples without candidates, gold or negatives
};

// k negatives per positive, drawn uniformly with replacement from the
// example's non-gold candidates.
std::vector<Triplet> sample_triplets(const TrainingExample& ex, std::size_t example_index,
                                     std::size_t k, Rng& rng);

// Sum of hinge losses over `triplets`; accumulates d(loss)/d(tables) into
// `grad` when given.
double triplet_loss(const EmbeddingModel& model, std::span<const TrainingExample> examples,
                    std::span<const Triplet> triplets, Gradients* grad,
                    const Encoder& encoder = default_encoder());

class Adam {
 public:
  Adam(const TrainConfig& cfg, OptimizerState& state) : cfg_(cfg), state_(state) {}
  void prepare(const EmbeddingModel& model);
  void step(EmbeddingModel& model, const Gradients& grad);

 private:
  TrainConfig cfg_;
  OptimizerState& state_;
};

// Throws NumericalError on a non-finite loss or parameter.
TrainReport train(EmbeddingModel& model, OptimizerState& optimizer,
                  std::span<const TrainingExample> examples, const TrainConfig& cfg,
                  const Encoder& encoder = default_encoder());

void write_loss_csv(const std::string& path, const TrainReport& report);

}  // namespace foodqa
