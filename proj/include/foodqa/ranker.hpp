#pragma once

// Embedding-matching KBQA ranker: vocabulary, embedding tables, the
// bag-of-embeddings encoder, dot-product scoring and theta-margin selection.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "foodqa/kernels.hpp"
#include "foodqa/kg.hpp"
#include "foodqa/personalization.hpp"

namespace foodqa {

class Vocabulary {
 public:
  static constexpr std::uint32_t kPad = 0;
  static constexpr std::uint32_t kUnk = 1;
  // Type and relation tables reserve index 0 for unknown entries.
  static constexpr std::uint32_t kUnkSymbol = 0;

  Vocabulary();

  std::uint32_t add_word(std::string_view w);
  std::uint32_t add_type(std::string_view t);
  std::uint32_t add_relation(std::string_view r);

  std::uint32_t word(std::string_view w) const;  // kUnk when missing
  std::uint32_t type(std::string_view t) const;
  std::uint32_t relation(std::string_view r) const;
  bool has_word(std::string_view w) const { return word_index_.contains(std::string(w)); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& types() const { return types_; }
  const std::vector<std::string>& relations() const { return relations_; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);
  bool operator==(const Vocabulary& o) const {
    return words_ == o.words_ && types_ == o.types_ && relations_ == o.relations_;
  }

 private:
  static std::uint32_t add(std::vector<std::string>& list,
                           std::unordered_map<std::string, std::uint32_t>& index,
                           std::string_view s);
  std::vector<std::string> words_, types_, relations_;
  std::unordered_map<std::string, std::uint32_t> word_index_, type_index_, relation_index_;
};

struct ModelConfig {
  std::size_t d = 64;     // word, type and relation embedding size
  std::size_t d_m = 40;   // markup embedding size
  double init_range = 0.08;

  std::size_t dim() const { return d + d_m; }
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

enum class Table : std::uint8_t { word = 0, markup = 1, type = 2, relation = 3 };
inline constexpr std::size_t kTableCount = 4;
std::string_view to_string(Table t);

struct EmbeddingModel {
  ModelConfig config;
  Vocabulary vocab;
  std::array<Matrix, kTableCount> tables;

  Matrix& table(Table t) { return tables[static_cast<std::size_t>(t)]; }
  const Matrix& table(Table t) const { return tables[static_cast<std::size_t>(t)]; }

  // Allocates every table for the current vocabulary and fills it uniformly
  // in [-init_range, init_range].
  void initialize(std::uint64_t seed);
  bool finite() const;
};

// Model inputs after vocabulary lookup.
struct IndexedQuery {
  std::vector<std::uint32_t> words;
  std::vector<std::uint8_t> markups;
};

struct IndexedAnswer {
  std::uint32_t type = 0;
  std::vector<std::uint32_t> path;
  std::vector<std::uint32_t> context_words;
  std::vector<std::uint8_t> context_markups;
};

IndexedQuery index_query(const Vocabulary& vocab, const ExpandedQuery& query);
IndexedAnswer index_answer(const Vocabulary& vocab, const CandidateAnswer& cand);

// Sparse gradient: touched rows per table.
struct Gradients {
  std::array<std::map<std::uint32_t, std::vector<double>>, kTableCount> rows;

  void add(Table t, std::uint32_t row, std::span<const double> g, double scale,
           std::size_t offset, std::size_t width);
  void merge(const Gradients& other);
  std::span<const double> get(Table t, std::uint32_t row) const;
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual std::vector<double> encode_query(const EmbeddingModel& m, const IndexedQuery& q) const = 0;
  virtual std::vector<double> encode_answer(const EmbeddingModel& m, const IndexedAnswer& a) const = 0;
  // Accumulate d(loss)/d(tables) given d(loss)/d(encoding).
  virtual void backward_query(const EmbeddingModel& m, const IndexedQuery& q,
                              std::span<const double> grad, Gradients& out) const = 0;
  virtual void backward_answer(const EmbeddingModel& m, const IndexedAnswer& a,
                               std::span<const double> grad, Gradients& out) const = 0;
};

// query  = mean_i [word(w_i); markup(m_i)]
// answer = pad(type) + pad(mean relation over path) + mean_k [word(w_k); markup(m_k)]
class BagOfEmbeddingsEncoder final : public Encoder {
 public:
  std::vector<double> encode_query(const EmbeddingModel& m, const IndexedQuery& q) const override;
  std::vector<double> encode_answer(const EmbeddingModel& m, const IndexedAnswer& a) const override;
  void backward_query(const EmbeddingModel& m, const IndexedQuery& q,
                      std::span<const double> grad, Gradients& out) const override;
  void backward_answer(const EmbeddingModel& m, const IndexedAnswer& a,
                       std::span<const double> grad, Gradients& out) const override;
};

const Encoder& default_encoder();

double score(std::span<const double> q, std::span<const double> a);
inline double hinge(double y_pos, double y_neg) {
  const double h = 1.0 + y_neg - y_pos;
  return h > 0.0 ? h : 0.0;
}

struct ScoredAnswer {
  std::string id;  // recipe id
  double score = 0.0;
};

// Descending score, ties by lowest id.
void sort_ranked(std::vector<ScoredAnswer>& scored);
// {a : S_max - S(a) <= theta}, in ranked order.
std::vector<ScoredAnswer> select_answers(std::vector<ScoredAnswer> scored, double theta);

// Checkpoint: JSON with format tag, version, run metadata, model config,
// vocabulary, tables and (optional) optimizer state.
struct OptimizerState {
  std::uint64_t step = 0;
  std::array<Matrix, kTableCount> m, v;  // Adam first / second moments

  bool operator==(const OptimizerState&) const = default;
};
void save_checkpoint(const std::string& path, const EmbeddingModel& model,
                     const OptimizerState* optimizer, const nlohmann::json& run_config);
EmbeddingModel load_checkpoint(const std::string& path, OptimizerState* optimizer = nullptr,
                               nlohmann::json* run_config = nullptr);

// `token v1 ... vd` lines; overwrites matching word rows. Returns the number
// of rows overwritten.
std::size_t load_pretrained_embeddings(EmbeddingModel& model, const std::string& path);

}  // namespace foodqa
