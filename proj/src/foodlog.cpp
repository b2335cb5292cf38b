#include "foodqa/foodlog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "foodqa/benchmark.hpp"
#include "foodqa/error.hpp"
#include "foodqa/rng.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

constexpr double kSimTolerance = 1e-9;

}  // namespace

std::optional<std::size_t> RecipeEmbeddings::row(EntityIndex recipe) const {
  auto it = row_of.find(recipe);
  if (it == row_of.end()) return std::nullopt;
  return it->second;
}

std::size_t RecipeEmbeddings::require_row(const KnowledgeGraph& kg,
                                          std::string_view recipe_id) const {
  const auto e = kg.find(recipe_id);
  if (!e) throw DataError("unknown recipe id '" + std::string(recipe_id) + "'");
  const auto r = row(*e);
  if (!r) throw DataError("recipe '" + std::string(recipe_id) + "' has no embedding");
  return *r;
}

RecipeEmbeddings make_recipe_embeddings(const KnowledgeGraph& kg, std::vector<EntityIndex> recipes,
                                        Matrix vectors) {
  if (recipes.size() != vectors.rows()) throw std::invalid_argument("embedding row count mismatch");
  std::vector<std::size_t> order(recipes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return kg.entity(recipes[a]).id < kg.entity(recipes[b]).id;
  });
  RecipeEmbeddings emb;
  emb.vectors = Matrix(recipes.size(), vectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    emb.recipes.push_back(recipes[order[i]]);
    const auto src = vectors.row(order[i]);
    std::copy(src.begin(), src.end(), emb.vectors.row(i).begin());
    emb.row_of.emplace(recipes[order[i]], i);
  }
  return emb;
}

RecipeEmbeddings load_recipe_embeddings(const std::string& path, const KnowledgeGraph& kg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open recipe embeddings '" + path + "'");
  std::vector<EntityIndex> recipes;
  std::vector<double> flat;
  std::set<EntityIndex> seen;
  std::size_t dim = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    std::istringstream ls(line);
    std::string id, field;
    ls >> id;
    const auto e = kg.find(id);
    if (!e || kg.entity(*e).type != EntityType::recipe) throw DataError(where + "unknown recipe id '" + id + "'");
    if (!seen.insert(*e).second) throw DataError(where + "duplicate recipe id '" + id + "'");
    std::vector<double> values;
    while (ls >> field) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw DataError(where + "malformed value '" + field + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw DataError(where + "no vector values");
    if (dim == 0) dim = values.size();
    if (values.size() != dim) throw DataError(where + "dimension mismatch");
    if (norm(values) == 0.0) throw DataError(where + "zero vector for '" + id + "'");
    recipes.push_back(*e);
    flat.insert(flat.end(), values.begin(), values.end());
  }
  Matrix m(recipes.size(), dim);
  m.data() = std::move(flat);
  return make_recipe_embeddings(kg, std::move(recipes), std::move(m));
}

void save_recipe_embeddings(const std::string& path, const KnowledgeGraph& kg,
                            const RecipeEmbeddings& emb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (std::size_t r = 0; r < emb.recipes.size(); ++r) {
    out << kg.entity(emb.recipes[r]).id;
    for (double v : emb.vectors.row(r)) out << ' ' << format_number(v);
    out << '\n';
  }
}

RecipeEmbeddings ingredient_mean_embeddings(const KnowledgeGraph& kg, const EmbeddingModel& model) {
  const auto recipes = kg.entities_of_type(EntityType::recipe);
  const auto& words = model.table(Table::word);
  Matrix m(recipes.size(), model.config.d);
  for (std::size_t i = 0; i < recipes.size(); ++i) {
    std::vector<std::uint32_t> rows;
    for (EntityIndex ing : kg.ingredients_of(recipes[i])) {
      for (const auto& w : tokenize(kg.entity(ing).label)) rows.push_back(model.vocab.word(w));
    }
    if (rows.empty()) rows.push_back(Vocabulary::kUnk);
    auto out = m.row(i);
    for (auto r : rows) {
      const auto w = words.row(r);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += w[k] / static_cast<double>(rows.size());
    }
  }
  // Trained word vectors share a large common component; without centering
  // every pair of recipes has cosine close to 1.
  std::vector<double> centroid(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) centroid[k] += m.at(i, k) / static_cast<double>(m.rows());
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<double> c(m.cols());
    for (std::size_t k = 0; k < m.cols(); ++k) c[k] = m.at(i, k) - centroid[k];
    if (norm(c) > 1e-12) std::copy(c.begin(), c.end(), m.row(i).begin());
  }
  return make_recipe_embeddings(kg, recipes, std::move(m));
}

SimilarityGraph build_knn_graph(const RecipeEmbeddings& emb, std::size_t k, bool parallel) {
  SimilarityGraph g;
  g.k = k;
  g.neighbors = parallel ? kernels::omp::knn_all_pairs(emb.vectors, k)
                         : kernels::serial::knn_all_pairs(emb.vectors, k);
  return g;
}

std::vector<std::size_t> resolve_log(const KnowledgeGraph& kg, const RecipeEmbeddings& emb,
                                     const FoodLog& log) {
  if (log.recipes.empty()) throw DataError("food log '" + log.diet_label + "' is empty");
  std::vector<std::size_t> rows;
  for (const auto& id : log.recipes) rows.push_back(emb.require_row(kg, id));
  return rows;
}

double log_similarity(const RecipeEmbeddings& emb, std::span<const std::size_t> log_rows,
                      std::size_t row) {
  if (log_rows.empty()) throw std::invalid_argument("empty food log");
  double best = -1.0;
  for (std::size_t r : log_rows) {
    best = std::max(best, r == row ? 1.0 : cosine(emb.vectors.row(r), emb.vectors.row(row)));
  }
  return std::clamp(best, -1.0, 1.0);
}

std::vector<EntityIndex> top_similar_recipes(const RecipeEmbeddings& emb,
                                             const SimilarityGraph& graph,
                                             std::span<const std::size_t> log_rows,
                                             std::size_t k) {
  const std::set<std::size_t> members(log_rows.begin(), log_rows.end());
  std::set<std::size_t> pool;
  for (std::size_t r : log_rows) {
    for (const auto& n : graph.neighbors.at(r)) {
      if (!members.contains(n.row)) pool.insert(n.row);
    }
  }
  std::vector<Neighbor> scored;
  for (std::size_t r : pool) scored.push_back({r, log_similarity(emb, log_rows, r)});
  // Rows are in recipe id order, so the lower row wins a tie.
  std::sort(scored.begin(), scored.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.row < b.row;
  });
  std::vector<EntityIndex> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(emb.recipes[scored[i].row]);
  return out;
}

Subgraph expand_kg_subgraph(const Subgraph& sub, std::span<const EntityIndex> recipes) {
  Subgraph out = sub;
  std::vector<EntityIndex> extra;
  for (EntityIndex r : recipes) {
    if (sub.contains(r)) continue;
    extra.push_back(r);
    for (const auto& e : sub.kg().edges(r)) extra.push_back(e.other);
  }
  if (!extra.empty()) out.add_entities(extra);
  return out;
}

double combined_score(double s_qa_norm, double s_sim, double lambda) {
  if (!(s_qa_norm >= 0.0 && s_qa_norm <= 1.0)) throw std::invalid_argument("s_qa_norm outside [0,1]");
  if (!(s_sim >= -1.0 - kSimTolerance && s_sim <= 1.0 + kSimTolerance)) {
    throw std::invalid_argument("similarity outside [-1,1]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda outside [0,1]");
  s_sim = std::clamp(s_sim, -1.0, 1.0);
  return (1.0 - lambda) * s_qa_norm + lambda * (s_sim + 1.0) / 2.0;
}

std::vector<double> normalize_scores(std::span<const double> scores) {
  std::vector<double> out(scores.size(), 1.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  if (*hi == *lo) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - *lo) / (*hi - *lo);
  return out;
}

double symbolic_score(const KnowledgeGraph& kg, EntityIndex recipe,
                      std::span<const Constraint> constraints) {
  if (constraints.empty()) return 1.0;
  const auto sat = satisfaction(kg, recipe, constraints);
  const auto held = std::count(sat.begin(), sat.end(), true);
  if (held == static_cast<long>(sat.size())) return 1.0;
  return held > 0 ? 0.5 : 0.0;
}

LogAwareGold logaware_gold(const Subgraph& sub, std::span<const Constraint> constraints,
                           std::span<const EntityIndex> similar, const RecipeEmbeddings& emb,
                           std::span<const std::size_t> log_rows, double lambda, double theta_g) {
  const auto& kg = sub.kg();
  LogAwareGold out;
  out.pool = oracle_gold_answers(sub, constraints);
  for (EntityIndex r : similar) {
    if (std::find(out.pool.begin(), out.pool.end(), r) == out.pool.end()) out.pool.push_back(r);
  }
  std::vector<ScoredAnswer> scored;
  std::map<std::string, EntityIndex> by_id;
  for (EntityIndex r : out.pool) {
    const auto row = emb.row(r);
    if (!row) throw DataError("recipe '" + kg.entity(r).id + "' has no embedding");
    const double s = combined_score(symbolic_score(kg, r, constraints),
                                    log_similarity(emb, log_rows, *row), lambda);
    scored.push_back({kg.entity(r).id, s});
    by_id.emplace(kg.entity(r).id, r);
  }
  for (const auto& a : select_answers(std::move(scored), theta_g)) out.recipes.push_back(by_id.at(a.id));
  return out;
}

// --------------------------------------------------------------- food logs

std::vector<DietTerms> load_diet_terms(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("diet term directory '" + dir + "' not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<DietTerms> out;
  for (const auto& f : files) {
    DietTerms d{f.stem().string(), {}};
    std::ifstream in(f);
    std::string line;
    while (std::getline(in, line)) {
      const auto t = to_lower(line);
      const auto b = t.find_first_not_of(" \t\r");
      if (b == std::string::npos || t[b] == '#') continue;
      d.terms.push_back(t.substr(b, t.find_last_not_of(" \t\r") - b + 1));
    }
    out.push_back(std::move(d));
  }
  return out;
}

nlohmann::json FoodLogConfig::to_json() const {
  return {{"logs_per_diet", logs_per_diet},
          {"terms_per_log", terms_per_log},
          {"mean_size", mean_size},
          {"min_size", min_size},
          {"max_size", max_size}};
}

namespace {

std::size_t poisson(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::size_t k = 0;
  do {
    ++k;
    p *= uniform_real(rng);
  } while (p > limit);
  return k - 1;
}

}  // namespace

std::vector<FoodLog> gen_food_logs(const KnowledgeGraph& kg, std::span<const DietTerms> diets,
                                   const FoodLogConfig& cfg, std::uint64_t seed) {
  std::vector<EntityIndex> recipes = kg.entities_of_type(EntityType::recipe);
  std::sort(recipes.begin(), recipes.end(),
            [&](EntityIndex a, EntityIndex b) { return kg.entity(a).id < kg.entity(b).id; });
  std::vector<std::vector<std::string>> names;
  for (EntityIndex r : recipes) names.push_back(tokenize(kg.entity(r).label));

  auto matches = [&](std::size_t r, const std::vector<std::string>& terms) {
    for (const auto& t : terms) {
      if (contains_tokens(names[r], tokenize(t))) return true;
    }
    return false;
  };

  std::vector<FoodLog> logs;
  for (const auto& diet : diets) {
    if (diet.terms.empty()) continue;
    bool any = false;
    for (std::size_t r = 0; r < recipes.size() && !any; ++r) any = matches(r, diet.terms);
    if (!any) {
      warn("diet '" + diet.label + "' matches no recipe names; skipped");
      continue;
    }
    for (std::size_t j = 0; j < cfg.logs_per_diet; ++j) {
      Rng rng = make_rng(seed, "foodlog-" + diet.label, j);
      std::vector<std::string> terms = diet.terms;
      shuffle(terms, rng);
      terms.resize(std::min(cfg.terms_per_log, terms.size()));
      std::vector<std::size_t> pool;
      for (std::size_t r = 0; r < recipes.size(); ++r) {
        if (matches(r, terms)) pool.push_back(r);
      }
      if (pool.empty()) continue;
      std::size_t size = std::clamp(poisson(rng, cfg.mean_size), cfg.min_size, cfg.max_size);
      size = std::min(size, pool.size());
      shuffle(pool, rng);
      pool.resize(size);
      std::sort(pool.begin(), pool.end());
      FoodLog log{diet.label, {}, terms};
      for (std::size_t r : pool) log.recipes.push_back(kg.entity(recipes[r]).id);
      logs.push_back(std::move(log));
    }
  }
  return logs;
}

nlohmann::json food_logs_json(std::span<const FoodLog> logs) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& l : logs) {
    j.push_back({{"diet_label", l.diet_label}, {"recipes", l.recipes}, {"terms", l.terms}});
  }
  return j;
}

void write_food_logs(const std::string& path, std::span<const FoodLog> logs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << food_logs_json(logs).dump(2) << '\n';
}

std::vector<FoodLog> read_food_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open food log file '" + path + "'");
  try {
    auto j = nlohmann::json::parse(in);
    if (j.is_object()) j = nlohmann::json::array({j});
    std::vector<FoodLog> logs;
    for (const auto& l : j) {
      FoodLog log;
      log.diet_label = l.value("diet_label", "");
      log.recipes = l.at("recipes").get<std::vector<std::string>>();
      log.terms = l.value("terms", std::vector<std::string>{});
      if (log.recipes.empty()) throw DataError("food log with no recipes in '" + path + "'");
      logs.push_back(std::move(log));
    }
    return logs;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("food log file '" + path + "': " + e.what());
  }
}

}  // namespace foodqa
