#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "foodqa/constraints.hpp"
#include "foodqa/kg.hpp"
#include "foodqa/rng.hpp"

namespace foodqa {

// Question template with {tag}, {in_list}, {limit} and {nutrient} slots.
// {limit} and {nutrient} always appear together; {in_list} has a polarity.
struct Template {
  std::string surface;
  std::optional<MarkupTag> in_list;  // positive or negative ingredient slot

  bool has_slot(std::string_view slot) const;
  void validate() const;
  // Number of query constraints a filled instance carries.
  std::size_t constraint_count() const;
};

std::vector<Template> load_templates(const std::string& path);
std::vector<Template> parse_templates(const nlohmann::json& j);

struct GeneratedQuestion {
  std::string raw_query;
  std::string topic_tag;
  std::vector<Constraint> query_constraints;
};

// Fills `tmpl` from the tag's subgraph. nullopt when the subgraph lacks a
// filler for a needed slot.
std::optional<GeneratedQuestion> fill_template(const Subgraph& tag_subgraph,
                                               const Template& tmpl,
                                               const ThresholdTable& thresholds,
                                               Rng& rng);

// Samples a tag (from `tags`, or every tag with recipes), then a template,
// and fills it; retries a bounded number of times before giving up.
std::optional<GeneratedQuestion> generate_question(
    const KnowledgeGraph& kg, std::span<const Template> pool,
    const ThresholdTable& thresholds, Rng& rng,
    std::span<const EntityIndex> tags = {}, int hops = 2, int max_retries = 20);

struct PersonaConfig {
  std::size_t likes = 1;
  std::size_t dislikes_min = 1;
  std::size_t dislikes_max = 2;
  // P(1), P(2), P(3) guidelines.
  std::vector<double> guideline_count_probs{0.85, 0.10, 0.05};
};

// Likes and dislikes are disjoint draws from `pool` (clamped to its size);
// guidelines are distinct entries of `guideline_table`. `pool_weights`, when
// given, biases the ingredient draw.
Persona sample_persona(std::span<const std::string> pool,
                       std::span<const Guideline> guideline_table,
                       const PersonaConfig& config, Rng& rng,
                       std::span<const double> pool_weights = {});

// Every recipe of `sub` that satisfies all constraints. Requires exactly one
// tag constraint.
std::vector<EntityIndex> oracle_gold_answers(const Subgraph& sub,
                                             std::span<const Constraint> constraints);

enum class Split { train, dev, test_in, test_ood };
std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct BenchmarkExample {
  std::string id;
  std::string raw_query;
  std::string topic_tag;
  std::vector<Constraint> query_constraints;
  Persona persona;
  std::vector<std::string> gold_answers;  // recipe ids, sorted
  Split split = Split::train;

  // query constraints (with the topic tag constraint) then persona constraints.
  std::vector<Constraint> all_constraints() const;
};

nlohmann::json to_json(const BenchmarkExample& ex);
BenchmarkExample example_from_json(const nlohmann::json& j);

struct BenchmarkConfig {
  std::size_t train = 1500;
  std::size_t dev = 200;
  std::size_t test = 300;
  std::size_t ood_tags = 3;
  double ood_share = 0.3;  // fraction of the test split drawn from OOD tags
  int hops = 2;
  int max_attempts = 400;  // per example
  PersonaConfig persona;

  nlohmann::json to_json() const;
};

struct SplitStats {
  std::size_t size = 0;
  double avg_raw_len = 0;
  double avg_expanded_len = 0;
  double avg_answers = 0;
  double avg_constraints = 0;
};

struct BenchmarkStats {
  std::vector<std::pair<std::string, SplitStats>> splits;  // train, dev, test-in, test-ood, test
  double target_constraints = 0;
  double pool_avg = 0;
  std::size_t pool_min = 0;
  std::size_t pool_max = 0;
  std::vector<std::string> ood_tags;
  std::vector<std::string> in_domain_tags;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct Benchmark {
  std::vector<BenchmarkExample> train, dev, test;  // test holds test-in then test-ood
  BenchmarkStats stats;
};

// Expected constraints per example implied by the config and template pool.
double expected_constraints(const BenchmarkConfig& config,
                            std::span<const Template> templates);

// Throws DataError when a split cannot be filled within the attempt budget.
Benchmark build_benchmark(const KnowledgeGraph& kg, std::span<const Template> templates,
                          std::span<const Guideline> guideline_table,
                          const ThresholdTable& thresholds,
                          const BenchmarkConfig& config, std::uint64_t seed);

BenchmarkStats compute_stats(std::span<const BenchmarkExample> train,
                             std::span<const BenchmarkExample> dev,
                             std::span<const BenchmarkExample> test);

// Re-derives every gold set with the oracle; throws DataError on mismatch or
// empty gold.
void verify_benchmark(const KnowledgeGraph& kg, const Benchmark& bench, int hops);

void write_jsonl(const std::string& path, std::span<const BenchmarkExample> examples);
std::vector<BenchmarkExample> read_jsonl(const std::string& path);

// Writes train/dev/test JSONL, stats.json, stats.txt; `provenance` is
// embedded in stats.json.
void write_benchmark(const std::string& dir, const Benchmark& bench,
                     const nlohmann::json& provenance);

// Ingredient labels used by the recipes of a tag, and their recipe counts.
std::vector<std::pair<std::string, std::size_t>> ingredient_pool(const KnowledgeGraph& kg,
                                                                  EntityIndex tag);

}  // namespace foodqa
