#include "foodqa/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>

#include "foodqa/error.hpp"
#include "foodqa/personalization.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

constexpr std::string_view kSlots[] = {"tag", "in_list", "limit", "nutrient"};

std::vector<std::string> slots_of(const std::string& surface) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = surface.find('{', pos)) != std::string::npos) {
    const auto end = surface.find('}', pos);
    if (end == std::string::npos) throw DataError("unclosed slot in template: " + surface);
    out.push_back(surface.substr(pos + 1, end - pos - 1));
    pos = end + 1;
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Weighted draw of `n` distinct indices (uniform when weights are empty).
std::vector<std::size_t> draw_distinct(std::size_t pool, std::size_t n,
                                       std::span<const double> weights, Rng& rng) {
  n = std::min(n, pool);
  std::vector<double> w(pool, 1.0);
  if (!weights.empty()) w.assign(weights.begin(), weights.end());
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k) {
    double total = 0;
    for (double x : w) total += x;
    if (!(total > 0)) break;
    double pick = uniform_real(rng) * total;
    std::size_t i = 0;
    for (; i + 1 < pool; ++i) {
      if (w[i] > 0 && pick < w[i]) break;
      pick -= w[i];
    }
    while (w[i] <= 0) --i;  // rounding fell past the last positive weight
    out.push_back(i);
    w[i] = 0;
  }
  return out;
}

std::vector<EntityIndex> tags_with_recipes(const KnowledgeGraph& kg) {
  std::vector<EntityIndex> out;
  for (EntityIndex t : kg.entities_of_type(EntityType::tag)) {
    if (!kg.recipes_with_tag(t).empty()) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), [&](EntityIndex a, EntityIndex b) {
    return kg.entity(a).id < kg.entity(b).id;
  });
  return out;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

// ---------------------------------------------------------------- Template

bool Template::has_slot(std::string_view slot) const {
  return surface.find("{" + std::string(slot) + "}") != std::string::npos;
}

void Template::validate() const {
  if (surface.empty()) throw DataError("empty template surface");
  for (const auto& s : slots_of(surface)) {
    if (std::find(std::begin(kSlots), std::end(kSlots), s) == std::end(kSlots)) {
      throw DataError("unknown slot {" + s + "} in template: " + surface);
    }
  }
  if (has_slot("in_list") != in_list.has_value()) {
    throw DataError("template {in_list} slot needs a polarity: " + surface);
  }
  if (in_list && *in_list == MarkupTag::padding) {
    throw DataError("template {in_list} polarity must be positive or negative");
  }
  if (has_slot("limit") != has_slot("nutrient")) {
    throw DataError("{limit} and {nutrient} must appear together: " + surface);
  }
}

std::size_t Template::constraint_count() const {
  return (has_slot("tag") ? 1 : 0) + (has_slot("in_list") ? 1 : 0) +
         (has_slot("limit") ? 1 : 0);
}

std::vector<Template> parse_templates(const nlohmann::json& j) {
  std::vector<Template> out;
  for (const auto& t : j) {
    Template tmpl;
    tmpl.surface = t.at("surface").get<std::string>();
    if (t.contains("in_list")) {
      const auto pol = t["in_list"].get<std::string>();
      if (pol == "positive") tmpl.in_list = MarkupTag::positive;
      else if (pol == "negative") tmpl.in_list = MarkupTag::negative;
      else throw DataError("in_list polarity must be positive or negative");
    }
    tmpl.validate();
    out.push_back(std::move(tmpl));
  }
  if (out.empty()) throw DataError("template pool is empty");
  return out;
}

std::vector<Template> load_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open template file '" + path + "'");
  try {
    return parse_templates(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("template file '" + path + "': " + e.what());
  }
}

// ------------------------------------------------------ question generation

std::optional<GeneratedQuestion> fill_template(const Subgraph& sub, const Template& tmpl,
                                               const ThresholdTable& thresholds, Rng& rng) {
  const auto& kg = sub.kg();
  GeneratedQuestion q;
  q.topic_tag = kg.entity(sub.topic()).label;
  q.raw_query = tmpl.surface;
  if (tmpl.has_slot("tag")) {
    replace_all(q.raw_query, "{tag}", q.topic_tag);
    q.query_constraints.push_back(Constraint::tag(q.topic_tag));
  }
  if (tmpl.has_slot("in_list")) {
    const auto recipes = sub.recipes();
    if (recipes.empty()) return std::nullopt;
    const auto ingr = kg.ingredients_of(recipes[uniform_index(rng, recipes.size())]);
    if (ingr.empty()) return std::nullopt;
    const std::string& label = kg.entity(ingr[uniform_index(rng, ingr.size())]).label;
    replace_all(q.raw_query, "{in_list}", label);
    q.query_constraints.push_back(Constraint::ingredient(
        label, *tmpl.in_list == MarkupTag::positive, ConstraintSource::query));
  }
  if (tmpl.has_slot("limit")) {
    const auto nutrient_names = thresholds.nutrients();
    if (nutrient_names.empty()) return std::nullopt;
    const auto& nutrient = nutrient_names[uniform_index(rng, nutrient_names.size())];
    const auto levels = thresholds.levels(nutrient);
    const auto& level = levels[uniform_index(rng, levels.size())];
    replace_all(q.raw_query, "{limit}", level);
    replace_all(q.raw_query, "{nutrient}", nutrient);
    q.query_constraints.push_back(thresholds.make_constraint(level, nutrient));
  }
  return q;
}

std::optional<GeneratedQuestion> generate_question(const KnowledgeGraph& kg,
                                                   std::span<const Template> pool,
                                                   const ThresholdTable& thresholds, Rng& rng,
                                                   std::span<const EntityIndex> tags, int hops,
                                                   int max_retries) {
  if (pool.empty()) throw std::invalid_argument("template pool is empty");
  std::vector<EntityIndex> all;
  if (tags.empty()) {
    all = tags_with_recipes(kg);
    tags = all;
  }
  if (tags.empty()) throw DataError("knowledge graph has no tag with recipes");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    const EntityIndex tag = tags[uniform_index(rng, tags.size())];
    const Subgraph sub = extract_subgraph(kg, tag, hops);
    const Template& tmpl = pool[uniform_index(rng, pool.size())];
    if (auto q = fill_template(sub, tmpl, thresholds, rng)) return q;
  }
  return std::nullopt;
}

// ----------------------------------------------------------------- persona

Persona sample_persona(std::span<const std::string> pool,
                       std::span<const Guideline> table, const PersonaConfig& cfg,
                       Rng& rng, std::span<const double> pool_weights) {
  Persona p;
  const std::size_t span_dis = cfg.dislikes_max >= cfg.dislikes_min
                                   ? cfg.dislikes_max - cfg.dislikes_min + 1
                                   : 1;
  const std::size_t n_dis = cfg.dislikes_min + uniform_index(rng, span_dis);
  const auto picks = draw_distinct(pool.size(), cfg.likes + n_dis, pool_weights, rng);
  for (std::size_t k = 0; k < picks.size(); ++k) {
    (k < cfg.likes ? p.likes : p.dislikes).push_back(pool[picks[k]]);
  }

  std::size_t n_guidelines = cfg.guideline_count_probs.size();
  double u = uniform_real(rng);
  for (std::size_t i = 0; i < cfg.guideline_count_probs.size(); ++i) {
    if (u < cfg.guideline_count_probs[i]) {
      n_guidelines = i + 1;
      break;
    }
    u -= cfg.guideline_count_probs[i];
  }
  for (auto gi : draw_distinct(table.size(), n_guidelines, {}, rng)) {
    p.guidelines.push_back(table[gi]);
  }
  return p;
}

// ------------------------------------------------------------------ oracle

std::vector<EntityIndex> oracle_gold_answers(const Subgraph& sub,
                                             std::span<const Constraint> constraints) {
  const auto n_tags = std::count_if(constraints.begin(), constraints.end(), [](const auto& c) {
    return c.kind == ConstraintKind::tag;
  });
  if (n_tags != 1) throw std::invalid_argument("oracle needs exactly one tag constraint");
  const auto& kg = sub.kg();
  std::vector<EntityIndex> out;
  for (EntityIndex r : sub.recipes()) {
    bool ok = true;
    for (const auto& c : constraints) {
      if (!satisfies(kg, r, c)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [&](EntityIndex a, EntityIndex b) { return kg.entity(a).id < kg.entity(b).id; });
  return out;
}

// ---------------------------------------------------------------- examples

std::string_view to_string(Split s) {
  switch (s) {
    case Split::dev:
      return "dev";
    case Split::test_in:
      return "test-in";
    case Split::test_ood:
      return "test-ood";
    case Split::train:
      break;
  }
  return "train";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test-in") return Split::test_in;
  if (s == "test-ood") return Split::test_ood;
  throw DataError("unknown split '" + std::string(s) + "'");
}

std::vector<Constraint> BenchmarkExample::all_constraints() const {
  std::vector<Constraint> out = query_constraints;
  const bool has_tag = std::any_of(out.begin(), out.end(), [](const auto& c) {
    return c.kind == ConstraintKind::tag;
  });
  if (!has_tag) out.insert(out.begin(), Constraint::tag(topic_tag));
  for (auto& c : persona.constraints()) out.push_back(std::move(c));
  return out;
}

nlohmann::json to_json(const BenchmarkExample& ex) {
  const auto eq = expand_query(ex.raw_query, ex.persona, ex.query_constraints);
  std::vector<std::string> tokens, markups;
  for (const auto& t : eq.tokens) {
    tokens.push_back(t.word);
    markups.emplace_back(to_string(t.markup));
  }
  nlohmann::json j;
  j["id"] = ex.id;
  j["raw_query"] = ex.raw_query;
  j["topic_tag"] = ex.topic_tag;
  j["query_constraints"] = ex.query_constraints;
  j["persona"] = ex.persona;
  j["gold_answers"] = ex.gold_answers;
  j["split"] = to_string(ex.split);
  j["expanded_query"] = eq.text;
  j["tokens"] = tokens;
  j["markups"] = markups;
  return j;
}

BenchmarkExample example_from_json(const nlohmann::json& j) {
  BenchmarkExample ex;
  ex.id = j.at("id").get<std::string>();
  ex.raw_query = j.at("raw_query").get<std::string>();
  ex.topic_tag = j.at("topic_tag").get<std::string>();
  ex.query_constraints = j.at("query_constraints").get<std::vector<Constraint>>();
  ex.persona = j.at("persona").get<Persona>();
  ex.persona.validate();
  ex.gold_answers = j.at("gold_answers").get<std::vector<std::string>>();
  ex.split = parse_split(j.at("split").get<std::string>());
  return ex;
}

void write_jsonl(const std::string& path, std::span<const BenchmarkExample> examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
}

std::vector<BenchmarkExample> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open benchmark file '" + path + "'");
  std::vector<BenchmarkExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(example_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ------------------------------------------------------------------- build

std::vector<std::pair<std::string, std::size_t>> ingredient_pool(const KnowledgeGraph& kg,
                                                                  EntityIndex tag) {
  std::map<std::string, std::size_t> counts;
  for (EntityIndex r : kg.recipes_with_tag(tag)) {
    for (EntityIndex i : kg.ingredients_of(r)) ++counts[kg.entity(i).label];
  }
  return {counts.begin(), counts.end()};
}

nlohmann::json BenchmarkConfig::to_json() const {
  return {{"train", train},
          {"dev", dev},
          {"test", test},
          {"ood_tags", ood_tags},
          {"ood_share", ood_share},
          {"hops", hops},
          {"max_attempts", max_attempts},
          {"persona",
           {{"likes", persona.likes},
            {"dislikes_min", persona.dislikes_min},
            {"dislikes_max", persona.dislikes_max},
            {"guideline_count_probs", persona.guideline_count_probs}}}};
}

double expected_constraints(const BenchmarkConfig& cfg, std::span<const Template> templates) {
  double per_template = 0;
  for (const auto& t : templates) {
    per_template += static_cast<double>(t.constraint_count() + (t.has_slot("tag") ? 0 : 1));
  }
  if (!templates.empty()) per_template /= static_cast<double>(templates.size());
  const double dislikes =
      0.5 * static_cast<double>(cfg.persona.dislikes_min + cfg.persona.dislikes_max);
  double guidelines = 0;
  for (std::size_t i = 0; i < cfg.persona.guideline_count_probs.size(); ++i) {
    guidelines += static_cast<double>(i + 1) * cfg.persona.guideline_count_probs[i];
  }
  return per_template + static_cast<double>(cfg.persona.likes) + dislikes + guidelines;
}

namespace {

struct TagContext {
  Subgraph sub;
  std::vector<std::string> pool;
  std::vector<double> weights;
};

struct SplitPlan {
  Split split;
  std::size_t count;
  std::vector<EntityIndex> tags;
};

std::optional<BenchmarkExample> make_example(const KnowledgeGraph& kg,
                                             const std::map<EntityIndex, TagContext>& ctx,
                                             const SplitPlan& plan, std::size_t index,
                                             std::span<const Template> templates,
                                             std::span<const Guideline> guidelines,
                                             const ThresholdTable& thresholds,
                                             const BenchmarkConfig& cfg, std::uint64_t seed) {
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    Rng rng = make_rng(seed, to_string(plan.split), index, static_cast<std::uint64_t>(attempt));
    const EntityIndex tag = plan.tags[uniform_index(rng, plan.tags.size())];
    const TagContext& tc = ctx.at(tag);
    const Template& tmpl = templates[uniform_index(rng, templates.size())];
    auto q = fill_template(tc.sub, tmpl, thresholds, rng);
    if (!q) continue;

    std::vector<std::string> pool;
    std::vector<double> weights;
    for (std::size_t i = 0; i < tc.pool.size(); ++i) {
      const bool in_query = std::any_of(
          q->query_constraints.begin(), q->query_constraints.end(),
          [&](const Constraint& c) { return c.subject == tc.pool[i]; });
      if (in_query) continue;
      pool.push_back(tc.pool[i]);
      weights.push_back(tc.weights[i]);
    }

    BenchmarkExample ex;
    ex.raw_query = q->raw_query;
    ex.topic_tag = q->topic_tag;
    ex.query_constraints = q->query_constraints;
    ex.split = plan.split;

    // Resample personas whose guidelines leave no feasible recipe.
    const Constraint tag_c = Constraint::tag(q->topic_tag);
    bool feasible = false;
    for (int p = 0; p < 10 && !feasible; ++p) {
      ex.persona = sample_persona(pool, guidelines, cfg.persona, rng, weights);
      std::vector<Constraint> gc{tag_c};
      for (const auto& g : ex.persona.guidelines) gc.push_back(Constraint::from_guideline(g));
      feasible = !oracle_gold_answers(tc.sub, gc).empty();
    }
    if (!feasible) continue;

    const auto gold = oracle_gold_answers(tc.sub, ex.all_constraints());
    if (gold.empty()) continue;
    for (EntityIndex g : gold) ex.gold_answers.push_back(kg.entity(g).id);
    return ex;
  }
  return std::nullopt;
}

std::string example_id(Split s, std::size_t i) {
  std::ostringstream os;
  os << to_string(s) << '-' << std::setw(5) << std::setfill('0') << (i + 1);
  return os.str();
}

}  // namespace

Benchmark build_benchmark(const KnowledgeGraph& kg, std::span<const Template> templates,
                          std::span<const Guideline> guideline_table,
                          const ThresholdTable& thresholds, const BenchmarkConfig& cfg,
                          std::uint64_t seed) {
  if (templates.empty()) throw DataError("template pool is empty");
  if (guideline_table.empty()) throw DataError("guideline table is empty");
  const auto tags = tags_with_recipes(kg);
  if (tags.empty()) throw DataError("knowledge graph has no tag with recipes");
  if (cfg.ood_tags >= tags.size()) {
    throw DataError("ood_tags must leave at least one in-domain tag");
  }

  std::vector<EntityIndex> shuffled = tags;
  Rng tag_rng = make_rng(seed, "ood-tags");
  shuffle(shuffled, tag_rng);
  std::vector<EntityIndex> ood(shuffled.begin(), shuffled.begin() + static_cast<long>(cfg.ood_tags));
  std::vector<EntityIndex> in_domain(shuffled.begin() + static_cast<long>(cfg.ood_tags),
                                     shuffled.end());
  auto by_id = [&](EntityIndex a, EntityIndex b) { return kg.entity(a).id < kg.entity(b).id; };
  std::sort(ood.begin(), ood.end(), by_id);
  std::sort(in_domain.begin(), in_domain.end(), by_id);

  std::map<EntityIndex, TagContext> ctx;
  for (EntityIndex t : tags) {
    TagContext tc{extract_subgraph(kg, t, cfg.hops), {}, {}};
    for (const auto& [label, count] : ingredient_pool(kg, t)) {
      tc.pool.push_back(label);
      tc.weights.push_back(static_cast<double>(count));
    }
    ctx.emplace(t, std::move(tc));
  }

  const std::size_t n_ood =
      cfg.ood_tags > 0 ? static_cast<std::size_t>(std::lround(cfg.test * cfg.ood_share)) : 0;
  const std::vector<SplitPlan> plans = {{Split::train, cfg.train, in_domain},
                                        {Split::dev, cfg.dev, in_domain},
                                        {Split::test_in, cfg.test - n_ood, in_domain},
                                        {Split::test_ood, n_ood, ood}};

  Benchmark bench;
  for (const auto& plan : plans) {
    std::vector<std::optional<BenchmarkExample>> made(plan.count);
    std::vector<std::string> errors(plan.count);
    const long n = static_cast<long>(plan.count);
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
      try {
        made[i] = make_example(kg, ctx, plan, static_cast<std::size_t>(i), templates,
                               guideline_table, thresholds, cfg, seed);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    auto& target = plan.split == Split::train ? bench.train
                   : plan.split == Split::dev ? bench.dev
                                              : bench.test;
    for (std::size_t i = 0; i < plan.count; ++i) {
      if (!errors[i].empty()) throw DataError(errors[i]);
      if (!made[i]) {
        throw DataError("could not fill split " + std::string(to_string(plan.split)) +
                        ": example " + std::to_string(i + 1) + " has no non-empty gold set after " +
                        std::to_string(cfg.max_attempts) + " attempts");
      }
      made[i]->id = example_id(plan.split, i);
      target.push_back(std::move(*made[i]));
    }
  }

  verify_benchmark(kg, bench, cfg.hops);
  bench.stats = compute_stats(bench.train, bench.dev, bench.test);
  bench.stats.target_constraints = expected_constraints(cfg, templates);
  for (EntityIndex t : ood) bench.stats.ood_tags.push_back(kg.entity(t).label);
  for (EntityIndex t : in_domain) bench.stats.in_domain_tags.push_back(kg.entity(t).label);

  std::vector<double> pools;
  std::size_t pmin = SIZE_MAX, pmax = 0;
  for (const auto* split : {&bench.train, &bench.dev, &bench.test}) {
    for (const auto& ex : *split) {
      const auto tag = kg.find_by_label(EntityType::tag, ex.topic_tag);
      const std::size_t n = ctx.at(*tag).pool.size();
      pools.push_back(static_cast<double>(n));
      pmin = std::min(pmin, n);
      pmax = std::max(pmax, n);
    }
  }
  bench.stats.pool_avg = mean(pools);
  bench.stats.pool_min = pools.empty() ? 0 : pmin;
  bench.stats.pool_max = pmax;
  return bench;
}

void verify_benchmark(const KnowledgeGraph& kg, const Benchmark& bench, int hops) {
  std::set<std::string> ids, seen_tags, ood_tags;
  std::map<std::string, Subgraph> subs;
  for (const auto* split : {&bench.train, &bench.dev, &bench.test}) {
    for (const auto& ex : *split) {
      if (!ids.insert(ex.id).second) throw DataError("duplicate example id " + ex.id);
      if (ex.split == Split::train || ex.split == Split::dev) seen_tags.insert(ex.topic_tag);
      if (ex.split == Split::test_ood) ood_tags.insert(ex.topic_tag);
      ex.persona.validate();
      auto it = subs.find(ex.topic_tag);
      if (it == subs.end()) {
        const auto tag = kg.find_by_label(EntityType::tag, ex.topic_tag);
        if (!tag) throw DataError(ex.id + ": unknown topic tag " + ex.topic_tag);
        it = subs.emplace(ex.topic_tag, extract_subgraph(kg, *tag, hops)).first;
      }
      std::vector<std::string> gold;
      for (EntityIndex g : oracle_gold_answers(it->second, ex.all_constraints())) {
        gold.push_back(kg.entity(g).id);
      }
      if (gold.empty()) throw DataError(ex.id + ": empty gold set");
      if (gold != ex.gold_answers) throw DataError(ex.id + ": gold set disagrees with oracle");
    }
  }
  for (const auto& t : ood_tags) {
    if (seen_tags.contains(t)) throw DataError("out-of-domain tag '" + t + "' leaks into train/dev");
  }
}

BenchmarkStats compute_stats(std::span<const BenchmarkExample> train,
                             std::span<const BenchmarkExample> dev,
                             std::span<const BenchmarkExample> test) {
  auto stats_of = [](const std::vector<const BenchmarkExample*>& exs) {
    SplitStats s;
    s.size = exs.size();
    if (exs.empty()) return s;
    for (const auto* ex : exs) {
      s.avg_raw_len += static_cast<double>(tokenize(ex->raw_query).size());
      s.avg_expanded_len += static_cast<double>(
          expand_query(ex->raw_query, ex->persona, ex->query_constraints).tokens.size());
      s.avg_answers += static_cast<double>(ex->gold_answers.size());
      s.avg_constraints += static_cast<double>(ex->all_constraints().size());
    }
    const double n = static_cast<double>(exs.size());
    s.avg_raw_len /= n;
    s.avg_expanded_len /= n;
    s.avg_answers /= n;
    s.avg_constraints /= n;
    return s;
  };
  std::vector<const BenchmarkExample*> tr, dv, ti, to, te;
  for (const auto& e : train) tr.push_back(&e);
  for (const auto& e : dev) dv.push_back(&e);
  for (const auto& e : test) {
    te.push_back(&e);
    (e.split == Split::test_ood ? to : ti).push_back(&e);
  }
  BenchmarkStats st;
  st.splits = {{"train", stats_of(tr)},
               {"dev", stats_of(dv)},
               {"test-in", stats_of(ti)},
               {"test-ood", stats_of(to)},
               {"test", stats_of(te)}};
  return st;
}

nlohmann::json BenchmarkStats::to_json() const {
  nlohmann::json j;
  for (const auto& [name, s] : splits) {
    j["splits"][name] = {{"size", s.size},
                         {"avg_raw_query_len", s.avg_raw_len},
                         {"avg_expanded_query_len", s.avg_expanded_len},
                         {"avg_answers", s.avg_answers},
                         {"avg_constraints", s.avg_constraints}};
  }
  j["target_avg_constraints"] = target_constraints;
  j["ingredient_pool"] = {{"avg", pool_avg}, {"min", pool_min}, {"max", pool_max}};
  j["ood_tags"] = ood_tags;
  j["in_domain_tags"] = in_domain_tags;
  return j;
}

std::string BenchmarkStats::to_text() const {
  std::ostringstream os;
  os << std::left << std::setw(26) << "";
  for (const auto& [name, _] : splits) os << std::right << std::setw(10) << name;
  os << '\n';
  auto row = [&](const char* label, auto get) {
    os << std::left << std::setw(26) << label;
    for (const auto& [_, s] : splits) os << std::right << std::setw(10) << get(s);
    os << '\n';
  };
  os << std::fixed << std::setprecision(1);
  row("Size", [](const SplitStats& s) { return static_cast<double>(s.size); });
  row("Avg. raw query len.", [](const SplitStats& s) { return s.avg_raw_len; });
  row("Avg. expanded query len.", [](const SplitStats& s) { return s.avg_expanded_len; });
  row("Avg. # of answers", [](const SplitStats& s) { return s.avg_answers; });
  row("Avg. # of constraints", [](const SplitStats& s) { return s.avg_constraints; });
  os << "target avg constraints: " << target_constraints << '\n';
  os << "ingredient pool avg/min/max: " << pool_avg << " / " << pool_min << " / " << pool_max
     << '\n';
  os << "out-of-domain tags: " << join(ood_tags, ", ") << '\n';
  return os.str();
}

void write_benchmark(const std::string& dir, const Benchmark& bench,
                     const nlohmann::json& provenance) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  write_jsonl((d / "train.jsonl").string(), bench.train);
  write_jsonl((d / "dev.jsonl").string(), bench.dev);
  write_jsonl((d / "test.jsonl").string(), bench.test);
  nlohmann::json stats = bench.stats.to_json();
  stats["config"] = provenance;
  std::ofstream(d / "stats.json", std::ios::binary) << stats.dump(2) << '\n';
  std::ofstream(d / "stats.txt", std::ios::binary) << bench.stats.to_text();
}

}  // namespace foodqa
