#include "foodqa/ranker.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

#include "foodqa/error.hpp"
#include "foodqa/rng.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

constexpr const char* kCheckpointFormat = "foodqa-checkpoint";
constexpr int kCheckpointVersion = 1;

nlohmann::json matrix_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) throw DataError("checkpoint table has wrong size");
  m.data() = std::move(data);
  return m;
}

}  // namespace

// -------------------------------------------------------------- vocabulary

Vocabulary::Vocabulary() {
  add(words_, word_index_, "<pad>");
  add(words_, word_index_, "<unk>");
  add(types_, type_index_, "<unk>");
  add(relations_, relation_index_, "<unk>");
}

std::uint32_t Vocabulary::add(std::vector<std::string>& list,
                              std::unordered_map<std::string, std::uint32_t>& index,
                              std::string_view s) {
  auto [it, inserted] = index.try_emplace(std::string(s), static_cast<std::uint32_t>(list.size()));
  if (inserted) list.emplace_back(s);
  return it->second;
}

std::uint32_t Vocabulary::add_word(std::string_view w) { return add(words_, word_index_, w); }
std::uint32_t Vocabulary::add_type(std::string_view t) { return add(types_, type_index_, t); }
std::uint32_t Vocabulary::add_relation(std::string_view r) {
  return add(relations_, relation_index_, r);
}

std::uint32_t Vocabulary::word(std::string_view w) const {
  auto it = word_index_.find(std::string(w));
  return it == word_index_.end() ? kUnk : it->second;
}

std::uint32_t Vocabulary::type(std::string_view t) const {
  auto it = type_index_.find(std::string(t));
  return it == type_index_.end() ? kUnkSymbol : it->second;
}

std::uint32_t Vocabulary::relation(std::string_view r) const {
  auto it = relation_index_.find(std::string(r));
  return it == relation_index_.end() ? kUnkSymbol : it->second;
}

nlohmann::json Vocabulary::to_json() const {
  return {{"words", words_}, {"types", types_}, {"relations", relations_}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  Vocabulary v;
  v.words_.clear();
  v.types_.clear();
  v.relations_.clear();
  v.word_index_.clear();
  v.type_index_.clear();
  v.relation_index_.clear();
  for (const auto& w : j.at("words")) v.add_word(w.get<std::string>());
  for (const auto& t : j.at("types")) v.add_type(t.get<std::string>());
  for (const auto& r : j.at("relations")) v.add_relation(r.get<std::string>());
  if (v.words_.size() < 2 || v.words_[kPad] != "<pad>" || v.words_[kUnk] != "<unk>") {
    throw DataError("vocabulary lacks reserved <pad>/<unk> entries");
  }
  return v;
}

// ------------------------------------------------------------------- model

nlohmann::json ModelConfig::to_json() const {
  return {{"d", d}, {"d_m", d_m}, {"init_range", init_range}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.d = j.value("d", c.d);
  c.d_m = j.value("d_m", c.d_m);
  c.init_range = j.value("init_range", c.init_range);
  return c;
}

std::string_view to_string(Table t) {
  switch (t) {
    case Table::word:
      return "word";
    case Table::markup:
      return "markup";
    case Table::type:
      return "type";
    case Table::relation:
      break;
  }
  return "relation";
}

void EmbeddingModel::initialize(std::uint64_t seed) {
  const std::size_t rows[kTableCount] = {vocab.words().size(), kMarkupCount, vocab.types().size(),
                                         vocab.relations().size()};
  const std::size_t cols[kTableCount] = {config.d, config.d_m, config.d, config.d};
  for (std::size_t t = 0; t < kTableCount; ++t) {
    Rng rng = make_rng(seed, "init", t);
    tables[t] = Matrix(rows[t], cols[t]);
    for (double& x : tables[t].data()) x = uniform_real(rng, -config.init_range, config.init_range);
  }
}

bool EmbeddingModel::finite() const {
  for (const auto& t : tables) {
    for (double x : t.data()) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

IndexedQuery index_query(const Vocabulary& vocab, const ExpandedQuery& query) {
  IndexedQuery q;
  for (const auto& t : query.tokens) {
    q.words.push_back(vocab.word(t.word));
    q.markups.push_back(static_cast<std::uint8_t>(t.markup));
  }
  return q;
}

IndexedAnswer index_answer(const Vocabulary& vocab, const CandidateAnswer& cand) {
  IndexedAnswer a;
  a.type = vocab.type(to_string(cand.answer_type));
  for (const auto& step : cand.answer_path) a.path.push_back(vocab.relation(step.token()));
  for (const auto& w : cand.answer_context) {
    a.context_words.push_back(vocab.word(w.word));
    a.context_markups.push_back(static_cast<std::uint8_t>(w.markup));
  }
  return a;
}

// --------------------------------------------------------------- gradients

void Gradients::add(Table t, std::uint32_t row, std::span<const double> g, double scale,
                    std::size_t offset, std::size_t width) {
  auto& r = rows[static_cast<std::size_t>(t)][row];
  if (r.empty()) r.assign(width, 0.0);
  for (std::size_t k = 0; k < width; ++k) r[k] += scale * g[offset + k];
}

void Gradients::merge(const Gradients& other) {
  for (std::size_t t = 0; t < kTableCount; ++t) {
    for (const auto& [row, g] : other.rows[t]) {
      auto& r = rows[t][row];
      if (r.empty()) r.assign(g.size(), 0.0);
      for (std::size_t k = 0; k < g.size(); ++k) r[k] += g[k];
    }
  }
}

std::span<const double> Gradients::get(Table t, std::uint32_t row) const {
  const auto& m = rows[static_cast<std::size_t>(t)];
  auto it = m.find(row);
  if (it == m.end()) return {};
  return it->second;
}

// ----------------------------------------------------------------- encoder

std::vector<double> BagOfEmbeddingsEncoder::encode_query(const EmbeddingModel& m,
                                                         const IndexedQuery& q) const {
  if (q.words.empty()) throw std::invalid_argument("cannot encode an empty query");
  const std::size_t d = m.config.d, dm = m.config.d_m;
  std::vector<double> out(d + dm, 0.0);
  const double inv = 1.0 / static_cast<double>(q.words.size());
  for (std::size_t i = 0; i < q.words.size(); ++i) {
    const auto w = m.table(Table::word).row(q.words[i]);
    const auto mk = m.table(Table::markup).row(q.markups[i]);
    for (std::size_t k = 0; k < d; ++k) out[k] += inv * w[k];
    for (std::size_t k = 0; k < dm; ++k) out[d + k] += inv * mk[k];
  }
  return out;
}

std::vector<double> BagOfEmbeddingsEncoder::encode_answer(const EmbeddingModel& m,
                                                          const IndexedAnswer& a) const {
  const std::size_t d = m.config.d, dm = m.config.d_m;
  std::vector<double> out(d + dm, 0.0);
  const auto t = m.table(Table::type).row(a.type);
  for (std::size_t k = 0; k < d; ++k) out[k] += t[k];
  if (!a.path.empty()) {
    const double inv = 1.0 / static_cast<double>(a.path.size());
    for (auto r : a.path) {
      const auto rel = m.table(Table::relation).row(r);
      for (std::size_t k = 0; k < d; ++k) out[k] += inv * rel[k];
    }
  }
  if (!a.context_words.empty()) {
    const double inv = 1.0 / static_cast<double>(a.context_words.size());
    for (std::size_t i = 0; i < a.context_words.size(); ++i) {
      const auto w = m.table(Table::word).row(a.context_words[i]);
      const auto mk = m.table(Table::markup).row(a.context_markups[i]);
      for (std::size_t k = 0; k < d; ++k) out[k] += inv * w[k];
      for (std::size_t k = 0; k < dm; ++k) out[d + k] += inv * mk[k];
    }
  }
  return out;
}

void BagOfEmbeddingsEncoder::backward_query(const EmbeddingModel& m, const IndexedQuery& q,
                                            std::span<const double> grad, Gradients& out) const {
  const std::size_t d = m.config.d, dm = m.config.d_m;
  const double inv = 1.0 / static_cast<double>(q.words.size());
  for (std::size_t i = 0; i < q.words.size(); ++i) {
    out.add(Table::word, q.words[i], grad, inv, 0, d);
    out.add(Table::markup, q.markups[i], grad, inv, d, dm);
  }
}

void BagOfEmbeddingsEncoder::backward_answer(const EmbeddingModel& m, const IndexedAnswer& a,
                                             std::span<const double> grad,
                                             Gradients& out) const {
  const std::size_t d = m.config.d, dm = m.config.d_m;
  out.add(Table::type, a.type, grad, 1.0, 0, d);
  if (!a.path.empty()) {
    const double inv = 1.0 / static_cast<double>(a.path.size());
    for (auto r : a.path) out.add(Table::relation, r, grad, inv, 0, d);
  }
  if (!a.context_words.empty()) {
    const double inv = 1.0 / static_cast<double>(a.context_words.size());
    for (std::size_t i = 0; i < a.context_words.size(); ++i) {
      out.add(Table::word, a.context_words[i], grad, inv, 0, d);
      out.add(Table::markup, a.context_markups[i], grad, inv, d, dm);
    }
  }
}

const Encoder& default_encoder() {
  static const BagOfEmbeddingsEncoder encoder;
  return encoder;
}

// --------------------------------------------------------------- selection

double score(std::span<const double> q, std::span<const double> a) { return dot(q, a); }

void sort_ranked(std::vector<ScoredAnswer>& scored) {
  std::sort(scored.begin(), scored.end(), [](const ScoredAnswer& a, const ScoredAnswer& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

std::vector<ScoredAnswer> select_answers(std::vector<ScoredAnswer> scored, double theta) {
  if (theta < 0) throw std::invalid_argument("theta must be non-negative");
  if (scored.empty()) return scored;
  sort_ranked(scored);
  const double best = scored.front().score;
  std::erase_if(scored, [&](const ScoredAnswer& a) { return best - a.score > theta; });
  return scored;
}

// -------------------------------------------------------------- checkpoint

void save_checkpoint(const std::string& path, const EmbeddingModel& model,
                     const OptimizerState* optimizer, const nlohmann::json& run_config) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["run_config"] = run_config;
  j["model_config"] = model.config.to_json();
  j["vocab"] = model.vocab.to_json();
  for (std::size_t t = 0; t < kTableCount; ++t) {
    j["tables"][std::string(to_string(static_cast<Table>(t)))] = matrix_json(model.tables[t]);
  }
  if (optimizer) {
    j["optimizer"]["step"] = optimizer->step;
    for (std::size_t t = 0; t < kTableCount; ++t) {
      const std::string name(to_string(static_cast<Table>(t)));
      j["optimizer"]["m"][name] = matrix_json(optimizer->m[t]);
      j["optimizer"]["v"][name] = matrix_json(optimizer->v[t]);
    }
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint '" + path + "'");
    out << j.dump() << '\n';
  }
  std::rename(tmp.c_str(), path.c_str());
}

EmbeddingModel load_checkpoint(const std::string& path, OptimizerState* optimizer,
                               nlohmann::json* run_config) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != kCheckpointFormat) throw DataError("not a checkpoint file");
    if (j.value("version", 0) != kCheckpointVersion) throw DataError("unsupported checkpoint version");
    EmbeddingModel model;
    model.config = ModelConfig::from_json(j.at("model_config"));
    model.vocab = Vocabulary::from_json(j.at("vocab"));
    for (std::size_t t = 0; t < kTableCount; ++t) {
      model.tables[t] = matrix_from_json(j.at("tables").at(std::string(to_string(static_cast<Table>(t)))));
    }
    if (model.table(Table::word).rows() != model.vocab.words().size() ||
        model.table(Table::word).cols() != model.config.d ||
        model.table(Table::markup).cols() != model.config.d_m ||
        model.table(Table::type).rows() != model.vocab.types().size() ||
        model.table(Table::relation).rows() != model.vocab.relations().size()) {
      throw DataError("checkpoint tables do not match its vocabulary/config");
    }
    if (optimizer && j.contains("optimizer")) {
      optimizer->step = j["optimizer"].at("step").get<std::uint64_t>();
      for (std::size_t t = 0; t < kTableCount; ++t) {
        const std::string name(to_string(static_cast<Table>(t)));
        optimizer->m[t] = matrix_from_json(j["optimizer"].at("m").at(name));
        optimizer->v[t] = matrix_from_json(j["optimizer"].at("v").at(name));
      }
    }
    if (run_config) *run_config = j.value("run_config", nlohmann::json::object());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint '" + path + "': " + e.what());
  }
}

std::size_t load_pretrained_embeddings(EmbeddingModel& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings '" + path + "'");
  auto& words = model.table(Table::word);
  std::size_t overwritten = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> values;
    std::string field;
    while (ls >> field) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": malformed value '" + field + "'");
      }
      values.push_back(v);
    }
    if (values.size() != model.config.d) {
      throw DataError(path + ":" + std::to_string(line_no) + ": dimension " +
                      std::to_string(values.size()) + " does not match model d=" +
                      std::to_string(model.config.d));
    }
    if (!model.vocab.has_word(token)) continue;
    std::copy(values.begin(), values.end(), words.row(model.vocab.word(token)).begin());
    ++overwritten;
  }
  return overwritten;
}

}  // namespace foodqa
