#include "foodqa/config.hpp"

#include <fstream>

#include "foodqa/error.hpp"

namespace foodqa {

std::string default_data_path(std::string_view relative) {
  return std::string(FOODQA_DATA_DIR) + "/" + std::string(relative);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["threads"] = threads;
  j["paths"] = {{"kg", paths.kg},
                {"bench", paths.bench},
                {"checkpoint", paths.checkpoint},
                {"embeddings", paths.embeddings},
                {"recipe_embeddings", paths.recipe_embeddings},
                {"logs", paths.logs},
                {"out", paths.out},
                {"templates", paths.templates},
                {"guidelines", paths.guidelines},
                {"thresholds", paths.thresholds},
                {"diets", paths.diets}};
  j["kg_gen"] = {{"n_recipes", kg_gen.n_recipes},
                 {"n_tags", kg_gen.n_tags},
                 {"ingredient_pool_size", kg_gen.ingredient_pool_size},
                 {"seed", kg_gen.seed}};
  j["bench"] = bench.to_json();
  j["model"] = model.to_json();
  j["train"] = train.to_json();
  j["foodlog"] = foodlog.to_json();
  j["toggles"] = {{"qe", toggles.qe}, {"ka", toggles.ka}, {"cm", toggles.cm}};
  j["hops"] = hops;
  j["theta"] = theta;
  j["theta_sim"] = theta_sim;
  j["theta_g"] = theta_g;
  j["lambda"] = lambda;
  j["top_k"] = top_k;
  j["knn"] = knn;
  return j;
}

namespace {

template <typename T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object()) throw DataError("config section '" + where + "' must be an object");
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw DataError("unknown config key '" + where + k + "'");
  }
}

}  // namespace

void RunConfig::merge(const nlohmann::json& j) {
  try {
    check_keys(j,
               {"seed", "threads", "paths", "kg_gen", "bench", "model", "train", "foodlog",
                "toggles", "hops", "theta", "theta_sim", "theta_g", "lambda", "top_k", "knn"},
               "");
    take(j, "seed", seed);
    take(j, "threads", threads);
    take(j, "hops", hops);
    take(j, "theta", theta);
    take(j, "theta_sim", theta_sim);
    take(j, "theta_g", theta_g);
    take(j, "lambda", lambda);
    take(j, "top_k", top_k);
    take(j, "knn", knn);
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      check_keys(p, {"kg", "bench", "checkpoint", "embeddings", "recipe_embeddings", "logs", "out",
                     "templates", "guidelines", "thresholds", "diets"},
                 "paths.");
      take(p, "kg", paths.kg);
      take(p, "bench", paths.bench);
      take(p, "checkpoint", paths.checkpoint);
      take(p, "embeddings", paths.embeddings);
      take(p, "recipe_embeddings", paths.recipe_embeddings);
      take(p, "logs", paths.logs);
      take(p, "out", paths.out);
      take(p, "templates", paths.templates);
      take(p, "guidelines", paths.guidelines);
      take(p, "thresholds", paths.thresholds);
      take(p, "diets", paths.diets);
    }
    if (j.contains("kg_gen")) {
      const auto& k = j["kg_gen"];
      check_keys(k, {"n_recipes", "n_tags", "ingredient_pool_size", "seed"}, "kg_gen.");
      take(k, "n_recipes", kg_gen.n_recipes);
      take(k, "n_tags", kg_gen.n_tags);
      take(k, "ingredient_pool_size", kg_gen.ingredient_pool_size);
      take(k, "seed", kg_gen.seed);
    }
    if (j.contains("bench")) {
      const auto& b = j["bench"];
      check_keys(b, {"train", "dev", "test", "ood_tags", "ood_share", "hops", "max_attempts", "persona"},
                 "bench.");
      take(b, "train", bench.train);
      take(b, "dev", bench.dev);
      take(b, "test", bench.test);
      take(b, "ood_tags", bench.ood_tags);
      take(b, "ood_share", bench.ood_share);
      take(b, "hops", bench.hops);
      take(b, "max_attempts", bench.max_attempts);
      if (b.contains("persona")) {
        const auto& p = b["persona"];
        check_keys(p, {"likes", "dislikes_min", "dislikes_max", "guideline_count_probs"},
                   "bench.persona.");
        take(p, "likes", bench.persona.likes);
        take(p, "dislikes_min", bench.persona.dislikes_min);
        take(p, "dislikes_max", bench.persona.dislikes_max);
        take(p, "guideline_count_probs", bench.persona.guideline_count_probs);
      }
    }
    if (j.contains("model")) {
      check_keys(j["model"], {"d", "d_m", "init_range"}, "model.");
      model = ModelConfig::from_json(j["model"]);
    }
    if (j.contains("train")) {
      check_keys(j["train"], {"epochs", "lr", "batch", "negatives", "beta1", "beta2", "eps", "seed"},
                 "train.");
      train = TrainConfig::from_json(j["train"], train);
    }
    if (j.contains("foodlog")) {
      const auto& f = j["foodlog"];
      check_keys(f, {"logs_per_diet", "terms_per_log", "mean_size", "min_size", "max_size"},
                 "foodlog.");
      take(f, "logs_per_diet", foodlog.logs_per_diet);
      take(f, "terms_per_log", foodlog.terms_per_log);
      take(f, "mean_size", foodlog.mean_size);
      take(f, "min_size", foodlog.min_size);
      take(f, "max_size", foodlog.max_size);
    }
    if (j.contains("toggles")) {
      const auto& t = j["toggles"];
      check_keys(t, {"qe", "ka", "cm"}, "toggles.");
      take(t, "qe", toggles.qe);
      take(t, "ka", toggles.ka);
      take(t, "cm", toggles.cm);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid config: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  RunConfig c;
  try {
    c.merge(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("config '" + path + "': " + e.what());
  }
  return c;
}

}  // namespace foodqa
