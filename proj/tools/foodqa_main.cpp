// foodqa: synthetic KG and benchmark generation, training, evaluation and
// ad-hoc personalized queries.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "foodqa/config.hpp"
#include "foodqa/error.hpp"
#include "foodqa/evaluate.hpp"

namespace fs = std::filesystem;
using namespace foodqa;
using nlohmann::json;

namespace {

// Flags overlay the (defaults + config file) RunConfig only when given.
class Overrides {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    auto value = std::make_shared<T>(target);
    CLI::Option* opt = app->add_option(name, *value, help);
    items_.emplace_back(opt, [value, &target] { target = *value; });
    return opt;
  }
  CLI::Option* flag(CLI::App* app, const std::string& name, bool& target, bool value_when_set,
                    const std::string& help) {
    CLI::Option* opt = app->add_flag(name, help);
    items_.emplace_back(opt, [&target, value_when_set] { target = value_when_set; });
    return opt;
  }
  void apply() const {
    for (const auto& [opt, fn] : items_)
      if (opt->count() > 0) fn();
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void()>>> items_;
};

void require(const std::string& value, const char* what) {
  if (value.empty()) throw CLI::RequiredError(what);
}

void write_json_file(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
  }
  fs::rename(tmp, path);
}

void write_sidecar(const std::string& artifact, const RunConfig& cfg, std::string_view command) {
  write_json_file(artifact + ".config.json", {{"command", command}, {"config", cfg.to_json()}});
}

void ensure_parent(const std::string& path) {
  const fs::path p = fs::path(path).parent_path();
  if (!p.empty()) fs::create_directories(p);
}

std::vector<BenchmarkExample> load_split(const std::string& bench_dir, const std::string& split) {
  if (split == "test-in" || split == "test-ood") {
    auto all = read_jsonl((fs::path(bench_dir) / "test.jsonl").string());
    const Split want = parse_split(split);
    std::erase_if(all, [&](const BenchmarkExample& e) { return e.split != want; });
    return all;
  }
  if (split != "train" && split != "dev" && split != "test")
    throw DataError("unknown split '" + split + "'");
  return read_jsonl((fs::path(bench_dir) / (split + ".jsonl")).string());
}

std::vector<Toggles> ablation_variants(const std::string& list) {
  std::vector<Toggles> out{Toggles{}};
  if (list == "all") {
    out.push_back({true, false, true});
    out.push_back({true, true, false});
    out.push_back({false, true, true});
    return out;
  }
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "ka") out.push_back({true, false, true});
    else if (item == "cm") out.push_back({true, true, false});
    else if (item == "qe") out.push_back({false, true, true});
    else if (item == "none") out.push_back({false, false, false});
    else throw CLI::ValidationError("--ablate", "unknown component '" + item + "'");
  }
  return out;
}

// ------------------------------------------------------------------ gen-kg

void cmd_gen_kg(const RunConfig& cfg) {
  require(cfg.paths.out, "--out");
  ensure_parent(cfg.paths.out);
  const KnowledgeGraph kg = gen_synthetic_kg(cfg.kg_gen);
  save_kg(kg, cfg.paths.out, "foodqa gen-kg " + cfg.to_json().dump());
  std::cout << kg.summary() << '\n';
}

// ----------------------------------------------------------- gen-benchmark

void cmd_gen_benchmark(const RunConfig& cfg) {
  require(cfg.paths.kg, "--kg");
  require(cfg.paths.out, "--out");
  const KnowledgeGraph kg = load_kg(cfg.paths.kg);
  const auto templates = load_templates(cfg.paths.templates);
  const auto guidelines = load_guideline_table(cfg.paths.guidelines);
  const auto thresholds = ThresholdTable::load(cfg.paths.thresholds);
  BenchmarkConfig bc = cfg.bench;
  bc.hops = cfg.hops;
  const Benchmark bench = build_benchmark(kg, templates, guidelines, thresholds, bc, cfg.seed);
  json provenance = cfg.to_json();
  provenance["thresholds_table"] = thresholds.to_json();
  write_benchmark(cfg.paths.out, bench, provenance);
  std::cout << bench.stats.to_text();
}

// ------------------------------------------------------------ gen-foodlogs

void cmd_gen_foodlogs(const RunConfig& cfg) {
  require(cfg.paths.kg, "--kg");
  require(cfg.paths.out, "--out");
  ensure_parent(cfg.paths.out);
  const KnowledgeGraph kg = load_kg(cfg.paths.kg);
  const auto diets = load_diet_terms(cfg.paths.diets);
  const auto logs = gen_food_logs(kg, diets, cfg.foodlog, cfg.seed);
  if (logs.empty()) throw DataError("no food log could be generated");
  write_food_logs(cfg.paths.out, logs);
  write_sidecar(cfg.paths.out, cfg, "gen-foodlogs");
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_diet;
  for (const auto& l : logs) {
    per_diet[l.diet_label].first += 1;
    per_diet[l.diet_label].second += l.recipes.size();
  }
  for (const auto& [label, c] : per_diet) {
    std::cout << label << ": " << c.first << " logs, avg "
              << static_cast<double>(c.second) / static_cast<double>(c.first) << " recipes\n";
  }
}

// ------------------------------------------------------------------- train

void cmd_train(const RunConfig& cfg, const std::string& loss_csv) {
  require(cfg.paths.bench, "--bench");
  require(cfg.paths.kg, "--kg");
  require(cfg.paths.out, "--out");
  ensure_parent(cfg.paths.out);
  const KnowledgeGraph kg = load_kg(cfg.paths.kg);
  const auto train = load_split(cfg.paths.bench, "train");
  const TrainedModel tm =
      train_model(kg, train, cfg.toggles, cfg.model, cfg.train, cfg.hops, cfg.paths.embeddings);
  save_checkpoint(cfg.paths.out, tm.model, &tm.optimizer, cfg.to_json());
  const std::string csv = loss_csv.empty() ? cfg.paths.out + ".loss.csv" : loss_csv;
  ensure_parent(csv);
  write_loss_csv(csv, tm.report);
  write_sidecar(csv, cfg, "train");
  std::cout << "variant " << cfg.toggles.label() << ", " << tm.report.steps << " steps, "
            << tm.report.skipped << " examples skipped\n";
  for (std::size_t e = 0; e < tm.report.epoch_loss.size(); ++e)
    std::cout << "epoch " << e + 1 << " loss " << tm.report.epoch_loss[e] << '\n';
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string split = "test";
  std::string ablate;
  bool recipesim = false;
};

void write_eval_outputs(const RunConfig& cfg, std::span<const EvalResult> results,
                        const json& extra) {
  std::cout << results_table(results);
  if (cfg.paths.out.empty()) return;
  fs::create_directories(cfg.paths.out);
  const fs::path dir = cfg.paths.out;
  write_results_csv((dir / "results.csv").string(), results);
  {
    std::ofstream out(dir / "results.txt", std::ios::binary);
    out << results_table(results);
    if (!out) throw DataError("cannot write results.txt");
  }
  for (const auto& r : results) {
    std::string name = r.label;
    for (char& c : name)
      if (c == '+') c = '_';
    write_per_question_jsonl((dir / ("per_question_" + name + ".jsonl")).string(), r);
  }
  json j{{"command", "eval"}, {"config", cfg.to_json()}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  write_json_file((dir / "config.json").string(), j);
}

void cmd_eval(RunConfig cfg, const EvalArgs& args) {
  require(cfg.paths.kg, "--kg");
  require(cfg.paths.bench, "--bench");
  require(cfg.paths.checkpoint, "--checkpoint");
  const KnowledgeGraph kg = load_kg(cfg.paths.kg);
  const auto examples = load_split(cfg.paths.bench, args.split);
  json ckpt_config;
  const EmbeddingModel model = load_checkpoint(cfg.paths.checkpoint, nullptr, &ckpt_config);
  // The model was trained under the checkpoint's toggles; evaluation uses them.
  Toggles trained;
  if (ckpt_config.contains("toggles")) {
    trained.qe = ckpt_config["toggles"].value("qe", true);
    trained.ka = ckpt_config["toggles"].value("ka", true);
    trained.cm = ckpt_config["toggles"].value("cm", true);
  }
  cfg.toggles = trained;
  json extra{{"split", args.split}, {"checkpoint_config", ckpt_config}};

  if (args.recipesim) {
    require(cfg.paths.logs, "--log");
    if (!(trained == Toggles{}))
      throw DataError("--recipesim needs a checkpoint trained with every component on");
    const auto logs = read_food_logs(cfg.paths.logs);
    const RecipeEmbeddings emb = cfg.paths.recipe_embeddings.empty()
                                     ? ingredient_mean_embeddings(kg, model)
                                     : load_recipe_embeddings(cfg.paths.recipe_embeddings, kg);
    const SimilarityGraph graph = build_knn_graph(emb, cfg.knn);
    RecipeSimOptions ro;
    ro.lambda = cfg.lambda;
    ro.theta_base = cfg.theta;
    ro.theta_sim = cfg.theta_sim;
    ro.theta_g = cfg.theta_g;
    ro.top_k = cfg.top_k;
    ro.hops = cfg.hops;
    ro.seed = cfg.seed;
    auto cmp = evaluate_recipesim(model, kg, examples, emb, graph, logs, ro);
    cmp.base.split = cmp.recipesim.split = args.split;
    const std::vector<EvalResult> rows{cmp.base, cmp.recipesim};
    extra["avg_logaware_gold"] = cmp.avg_gold;
    extra["avg_added_candidates"] = cmp.avg_added;
    write_eval_outputs(cfg, rows, extra);
    std::cout << "log-aware gold per question " << cmp.avg_gold << ", candidates added "
              << cmp.avg_added << '\n';
    return;
  }

  const std::vector<Toggles> variants =
      args.ablate.empty() ? std::vector<Toggles>{trained} : ablation_variants(args.ablate);
  std::vector<EvalResult> results;
  std::vector<BenchmarkExample> train_split;
  ModelConfig mc = cfg.model;
  TrainConfig tc = cfg.train;
  if (ckpt_config.contains("model")) mc = ModelConfig::from_json(ckpt_config["model"]);
  if (ckpt_config.contains("train")) tc = TrainConfig::from_json(ckpt_config["train"], tc);
  const std::string pretrained = ckpt_config.contains("paths")
                                     ? ckpt_config["paths"].value("embeddings", std::string())
                                     : std::string();
  for (const Toggles& t : variants) {
    EvalOptions eo;
    eo.toggles = t;
    eo.theta = cfg.theta;
    eo.hops = cfg.hops;
    if (t == trained) {
      results.push_back(evaluate(model, kg, examples, eo, t.label(), args.split));
      continue;
    }
    // Other variants are retrained with the checkpoint's settings.
    if (train_split.empty()) train_split = load_split(cfg.paths.bench, "train");
    const TrainedModel tm = train_model(kg, train_split, t, mc, tc, cfg.hops, pretrained);
    results.push_back(evaluate(tm.model, kg, examples, eo, t.label(), args.split));
  }
  write_eval_outputs(cfg, results, extra);
}

// --------------------------------------------------------------------- ask

std::string check_mark(bool ok) { return ok ? "satisfied" : "VIOLATED"; }

std::string describe(const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::tag: return "tag " + c.subject;
    case ConstraintKind::positive_ingredient: return "contains " + c.subject;
    case ConstraintKind::negative_ingredient: return "does not have " + c.subject;
    case ConstraintKind::nutrient_range: return c.phrase();
  }
  return c.subject;
}

void cmd_ask(const RunConfig& cfg, const std::string& query, const std::string& persona_path,
             std::size_t show) {
  require(cfg.paths.kg, "--kg");
  require(cfg.paths.checkpoint, "--checkpoint");
  if (query.empty()) throw CLI::RequiredError("--query");
  const KnowledgeGraph kg = load_kg(cfg.paths.kg);
  json ckpt_config;
  const EmbeddingModel model = load_checkpoint(cfg.paths.checkpoint, nullptr, &ckpt_config);
  Toggles toggles;
  if (ckpt_config.contains("toggles")) {
    toggles.qe = ckpt_config["toggles"].value("qe", true);
    toggles.ka = ckpt_config["toggles"].value("ka", true);
    toggles.cm = ckpt_config["toggles"].value("cm", true);
  }
  const auto thresholds = ThresholdTable::load(cfg.paths.thresholds);

  const ParsedQuery parsed = parse_query(kg, thresholds, query);
  if (!parsed.topic) {
    std::string msg = "no tag of the knowledge graph appears in the query";
    if (!parsed.suggestion.empty()) msg += "; did you mean '" + parsed.suggestion + "'?";
    throw DataError(msg);
  }
  BenchmarkExample ex;
  ex.id = "ask";
  ex.raw_query = query;
  ex.topic_tag = kg.entity(*parsed.topic).label;
  for (const auto& c : parsed.constraints)
    if (c.kind != ConstraintKind::tag) ex.query_constraints.push_back(c);
  ex.query_constraints.insert(ex.query_constraints.begin(), Constraint::tag(ex.topic_tag));
  if (!persona_path.empty()) {
    ex.persona = load_persona(persona_path);
    ex.persona.validate(ex.persona.guidelines.size());
  }

  const ExpandedQuery eq = model_query(ex, toggles);
  std::cout << "topic: " << ex.topic_tag << '\n';
  std::cout << "model: " << toggles.label() << '\n';
  std::cout << "expanded query: " << eq.text << '\n';

  const Subgraph sub = extract_subgraph(kg, *parsed.topic, cfg.hops);
  std::vector<ScoredAnswer> ranked;
  double theta = cfg.theta;
  std::map<std::string, std::array<double, 3>> parts;  // raw, normalized, similarity
  if (!cfg.paths.logs.empty()) {
    const auto logs = read_food_logs(cfg.paths.logs);
    if (logs.empty()) throw DataError("food log file holds no log");
    const RecipeEmbeddings emb = cfg.paths.recipe_embeddings.empty()
                                     ? ingredient_mean_embeddings(kg, model)
                                     : load_recipe_embeddings(cfg.paths.recipe_embeddings, kg);
    const SimilarityGraph graph = build_knn_graph(emb, cfg.knn);
    const auto rows = resolve_log(kg, emb, logs.front());
    const auto similar = top_similar_recipes(emb, graph, rows, cfg.top_k);
    const Subgraph expanded = expand_kg_subgraph(sub, similar);
    const auto prepared = prepare_on_subgraph(ex, expanded, toggles, {});
    ranked = score_candidates(model, prepared);
    std::vector<double> raw;
    for (const auto& s : ranked) raw.push_back(s.score);
    const auto norm = normalize_scores(raw);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      const double sim = log_similarity(emb, rows, emb.require_row(kg, ranked[k].id));
      parts[ranked[k].id] = {raw[k], norm[k], sim};
      ranked[k].score = combined_score(norm[k], sim, cfg.lambda);
    }
    theta = cfg.theta_sim;
    std::cout << "food log: " << logs.front().diet_label << " (" << rows.size()
              << " recipes), " << similar.size() << " similar recipes added\n";
  } else {
    ranked = score_candidates(model, prepare_on_subgraph(ex, sub, toggles, {}));
  }
  const auto selected = select_answers(ranked, theta);
  std::cout << "candidates: " << ranked.size() << ", returned: " << selected.size()
            << " (theta " << theta << ")\n";

  // The query and the persona may state the same constraint; list it once.
  std::vector<Constraint> constraints;
  std::set<std::string> listed;
  for (const auto& c : ex.all_constraints())
    if (listed.insert(describe(c)).second) constraints.push_back(c);
  std::size_t flagged = 0;
  const std::size_t n = std::min(show, selected.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = selected[k];
    const EntityIndex r = kg.require(a.id);
    const auto sat = satisfaction(kg, r, constraints);
    const bool all_ok = std::all_of(sat.begin(), sat.end(), [](bool b) { return b; });
    flagged += all_ok ? 0 : 1;
    std::cout << std::fixed << std::setprecision(4);
    std::cout << k + 1 << ". " << kg.entity(r).label << " [" << a.id << "] score " << a.score;
    if (auto it = parts.find(a.id); it != parts.end()) {
      std::cout << " (kbqa " << it->second[0] << ", normalized " << it->second[1]
                << ", log similarity " << it->second[2] << ")";
    }
    std::cout << (all_ok ? "" : "  <- violates constraints") << '\n';
    std::cout.unsetf(std::ios::fixed);
    for (std::size_t c = 0; c < constraints.size(); ++c)
      std::cout << "     " << check_mark(sat[c]) << ": " << describe(constraints[c]) << '\n';
  }
  if (flagged > 0) std::cout << flagged << " shown recipe(s) violate at least one constraint\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personalized food recommendation as constrained question answering"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  RunConfig cfg;
  Overrides ov;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (default: $FOODQA_CONFIG)");
  ov.option(&app, "--threads", cfg.threads, "OpenMP threads; 1 is fully deterministic");
  ov.option(&app, "--seed", cfg.seed, "random seed");

  auto* gen_kg = app.add_subcommand("gen-kg", "generate a synthetic recipe knowledge graph");
  ov.option(gen_kg, "--n-recipes", cfg.kg_gen.n_recipes, "recipes");
  ov.option(gen_kg, "--n-tags", cfg.kg_gen.n_tags, "tags");
  ov.option(gen_kg, "--ingredients", cfg.kg_gen.ingredient_pool_size, "ingredient pool size");
  ov.option(gen_kg, "--out", cfg.paths.out, "output TSV");

  auto* gen_bench = app.add_subcommand("gen-benchmark", "generate the personalized benchmark");
  ov.option(gen_bench, "--kg", cfg.paths.kg, "knowledge graph TSV");
  ov.option(gen_bench, "--train", cfg.bench.train, "train examples");
  ov.option(gen_bench, "--dev", cfg.bench.dev, "dev examples");
  ov.option(gen_bench, "--test", cfg.bench.test, "test examples");
  ov.option(gen_bench, "--ood-tags", cfg.bench.ood_tags, "tags held out for the test split");
  ov.option(gen_bench, "--ood-share", cfg.bench.ood_share, "share of test drawn from held-out tags");
  ov.option(gen_bench, "--templates", cfg.paths.templates, "question templates JSON");
  ov.option(gen_bench, "--guidelines", cfg.paths.guidelines, "guideline table JSON");
  ov.option(gen_bench, "--thresholds", cfg.paths.thresholds, "nutrient threshold table JSON");
  ov.option(gen_bench, "--hops", cfg.hops, "subgraph radius");
  ov.option(gen_bench, "--out", cfg.paths.out, "output directory");

  auto* gen_logs = app.add_subcommand("gen-foodlogs", "generate synthetic food logs");
  ov.option(gen_logs, "--kg", cfg.paths.kg, "knowledge graph TSV");
  ov.option(gen_logs, "--diets", cfg.paths.diets, "directory of diet term lists");
  ov.option(gen_logs, "--logs-per-diet", cfg.foodlog.logs_per_diet, "logs per diet");
  ov.option(gen_logs, "--mean-size", cfg.foodlog.mean_size, "mean recipes per log");
  ov.option(gen_logs, "--out", cfg.paths.out, "output JSON");

  auto* train = app.add_subcommand("train", "train the ranking model");
  std::string loss_csv;
  ov.option(train, "--bench", cfg.paths.bench, "benchmark directory");
  ov.option(train, "--kg", cfg.paths.kg, "knowledge graph TSV");
  ov.option(train, "--epochs", cfg.train.epochs, "epochs");
  ov.option(train, "--lr", cfg.train.lr, "learning rate");
  ov.option(train, "--batch", cfg.train.batch, "batch size");
  ov.option(train, "--negatives", cfg.train.negatives, "negatives per positive");
  ov.option(train, "--dim", cfg.model.d, "word, type and relation dimension");
  ov.option(train, "--markup-dim", cfg.model.d_m, "markup dimension");
  ov.option(train, "--embeddings", cfg.paths.embeddings, "pretrained word vectors");
  ov.option(train, "--hops", cfg.hops, "subgraph radius");
  ov.flag(train, "--no-qe", cfg.toggles.qe, false, "disable query expansion");
  ov.flag(train, "--no-ka", cfg.toggles.ka, false, "disable KG augmentation");
  ov.flag(train, "--no-cm", cfg.toggles.cm, false, "disable constraint markups");
  ov.option(train, "--out", cfg.paths.out, "checkpoint path");
  train->add_option("--loss-csv", loss_csv, "loss curve CSV (default: <out>.loss.csv)");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  EvalArgs eval_args;
  ov.option(eval, "--bench", cfg.paths.bench, "benchmark directory");
  ov.option(eval, "--kg", cfg.paths.kg, "knowledge graph TSV");
  ov.option(eval, "--checkpoint", cfg.paths.checkpoint, "checkpoint");
  eval->add_option("--split", eval_args.split, "train, dev, test, test-in or test-ood");
  eval->add_option("--ablate", eval_args.ablate,
                   "'all' or a comma list of qe,ka,cm,none; missing variants are retrained");
  eval->add_flag("--recipesim", eval_args.recipesim, "compare against food-log re-ranking");
  ov.option(eval, "--log", cfg.paths.logs, "food log JSON");
  ov.option(eval, "--recipe-embeddings", cfg.paths.recipe_embeddings, "recipe vectors");
  ov.option(eval, "--lambda", cfg.lambda, "food-log weight");
  // --theta is the margin of the system under test: the re-ranker with
  // --recipesim, the base model otherwise.
  double eval_theta = 0;
  auto* theta_opt = eval->add_option("--theta", eval_theta, "answer margin");
  ov.option(eval, "--theta-base", cfg.theta, "base model margin in --recipesim mode");
  ov.option(eval, "--theta-g", cfg.theta_g, "log-aware gold margin");
  ov.option(eval, "--top-k", cfg.top_k, "recipes added by food-log expansion");
  ov.option(eval, "--knn", cfg.knn, "similarity graph degree");
  ov.option(eval, "--hops", cfg.hops, "subgraph radius");
  ov.option(eval, "--out", cfg.paths.out, "output directory");

  auto* ask = app.add_subcommand("ask", "answer one personalized question");
  std::string query, persona;
  std::size_t show = 10;
  ask->add_option("--query", query, "question text");
  ask->add_option("--persona", persona, "persona JSON");
  ov.option(ask, "--foodlog", cfg.paths.logs, "food log JSON (first log is used)");
  ov.option(ask, "--recipe-embeddings", cfg.paths.recipe_embeddings, "recipe vectors");
  ov.option(ask, "--kg", cfg.paths.kg, "knowledge graph TSV");
  ov.option(ask, "--checkpoint", cfg.paths.checkpoint, "checkpoint");
  ov.option(ask, "--thresholds", cfg.paths.thresholds, "nutrient threshold table JSON");
  double ask_theta = 0;
  auto* ask_theta_opt = ask->add_option("--theta", ask_theta, "answer margin");
  ov.option(ask, "--lambda", cfg.lambda, "food-log weight");
  ask->add_option("--show", show, "answers to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("FOODQA_CONFIG"); env != nullptr) config_path = env;
    }
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    ov.apply();
    // One seed drives every stage.
    cfg.kg_gen.seed = cfg.seed;
    cfg.train.seed = cfg.seed;
    if (theta_opt->count() > 0) (eval_args.recipesim ? cfg.theta_sim : cfg.theta) = eval_theta;
    if (ask_theta_opt->count() > 0) (cfg.paths.logs.empty() ? cfg.theta : cfg.theta_sim) = ask_theta;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    if (gen_kg->parsed()) cmd_gen_kg(cfg);
    else if (gen_bench->parsed()) cmd_gen_benchmark(cfg);
    else if (gen_logs->parsed()) cmd_gen_foodlogs(cfg);
    else if (train->parsed()) cmd_train(cfg, loss_csv);
    else if (eval->parsed()) cmd_eval(cfg, eval_args);
    else if (ask->parsed()) cmd_ask(cfg, query, persona, show);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
