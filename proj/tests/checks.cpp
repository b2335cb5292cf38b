#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "foodqa/foodlog.hpp"
#include "foodqa/personalization.hpp"
#include "foodqa/synthetic_kg.hpp"
#include "foodqa/trainer.hpp"
#include "oracles.hpp"

namespace checks {

using namespace foodqa;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<EntityIndex> sorted(const std::set<EntityIndex>& s) { return {s.begin(), s.end()}; }

}  // namespace

Result oracle_equivalence(std::size_t instances, std::uint64_t seed) {
  Rng rng = make_rng(seed, "oracle-equivalence");
  std::size_t mismatches = 0, nonempty = 0, total_gold = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    KnowledgeGraph kg;
    if (i % 2 == 0) {
      SyntheticKgConfig cfg;
      cfg.n_recipes = 80 + uniform_index(rng, 120);
      cfg.n_tags = 6 + uniform_index(rng, 10);
      cfg.ingredient_pool_size = 30 + uniform_index(rng, 40);
      cfg.seed = seed * 1000 + i;
      kg = gen_synthetic_kg(cfg);
    } else {
      kg = oracle::mixed_unit_kg(seed * 1000 + i, 30 + uniform_index(rng, 60));
    }
    const auto tags = kg.entities_of_type(EntityType::tag);
    const EntityIndex tag = tags[uniform_index(rng, tags.size())];
    const Subgraph sub = extract_subgraph(kg, tag, 2);
    const auto reach = sorted(oracle::bfs_entities(kg, tag, 2));
    const auto cs = oracle::random_constraints(kg, reach, kg.entity(tag).label, rng);

    std::vector<std::string> got;
    for (EntityIndex r : oracle_gold_answers(sub, cs)) got.push_back(kg.entity(r).id);
    const auto want = oracle::gold(kg, reach, cs);
    mismatches += got != want;
    nonempty += !want.empty();
    total_gold += want.size();
  }
  return {mismatches == 0, std::to_string(instances) + " instances, " +
                               std::to_string(mismatches) + " mismatches, " +
                               std::to_string(nonempty) + " with non-empty gold (" +
                               std::to_string(total_gold) + " answers)"};
}

Result augmentation_exactness(std::size_t tuples, std::uint64_t seed) {
  Rng rng = make_rng(seed, "ka-exactness");
  std::size_t wrong = 0, admitted = 0, boundary = 0, percent = 0;
  for (std::size_t i = 0; i < tuples; ++i) {
    const bool pct = uniform_real(rng) < 0.5;
    const bool fat = uniform_real(rng) < 0.5;
    const std::string nutrient = fat ? "fat" : "protein";
    const double m = fat ? 9.0 : 4.0;
    double v = std::round(uniform_real(rng, 0, 60) * 100) / 100;
    const double kcal = std::round(uniform_real(rng, 1, 1200) * 10) / 10;
    Guideline g;
    g.nutrient = nutrient;
    g.mode = pct ? RangeMode::percent_of_calories : RangeMode::absolute_grams;
    if (pct) g.multiplier = m;
    const double span = pct ? 1.0 : 60.0;
    g.lo = uniform_real(rng, 0, span * 0.7);
    g.hi = g.lo + uniform_real(rng, 0, span * 0.5);
    const double x = pct ? v * m / kcal : v;
    const double edge = uniform_real(rng);
    if (edge < 0.1) {
      g.lo = x;  // closed lower end
      g.hi = std::max(g.hi, x);
      ++boundary;
    } else if (edge < 0.2) {
      g.hi = x;  // closed upper end
      g.lo = std::min(g.lo, x);
      ++boundary;
    } else if (edge < 0.25) {
      g.lo = g.hi = x;
      ++boundary;
    }
    percent += pct;

    KnowledgeGraph::Builder b;
    const auto r = b.add_entity("r", "some dish", EntityType::recipe);
    b.add_triple(r, "hasTag", b.add_entity("t", "dinner", EntityType::tag));
    const auto lit = b.add_literal(r, v, "g", nutrient);
    b.add_triple(r, "hasNutrient", lit);
    b.add_triple(r, "hasNutrient", b.add_literal(r, kcal, "kcal", "calories"));
    const auto kg = std::move(b).build();
    const Subgraph sub = extract_subgraph(kg, kg.require("t"), 2);
    const Constraint c = Constraint::from_guideline(g);
    const Subgraph aug = augment_subgraph(sub, std::span<const Constraint>(&c, 1));

    const bool indicator = x >= g.lo && x <= g.hi;
    admitted += indicator;
    const EntityIndex li = kg.require("r#" + nutrient);
    const std::string& label = aug.label(li);
    const bool replaced = label == c.phrase();
    if (replaced != indicator || (!indicator && !label.empty()) || !aug.is_augmented(li)) ++wrong;
    // The calories literal is not targeted.
    if (aug.is_augmented(kg.require("r#calories"))) ++wrong;
  }
  return {wrong == 0, std::to_string(tuples) + " tuples (" + std::to_string(percent) +
                          " percent-of-calories, " + std::to_string(boundary) +
                          " on a boundary, " + std::to_string(admitted) + " admitted), " +
                          std::to_string(wrong) + " wrong"};
}

namespace {

TrainingExample random_example(Rng& rng, const EmbeddingModel& m) {
  const auto words = static_cast<std::uint32_t>(m.vocab.words().size());
  const auto types = static_cast<std::uint32_t>(m.vocab.types().size());
  const auto rels = static_cast<std::uint32_t>(m.vocab.relations().size());
  TrainingExample ex;
  const std::size_t qn = 3 + uniform_index(rng, 5);
  for (std::size_t i = 0; i < qn; ++i) {
    ex.query.words.push_back(static_cast<std::uint32_t>(uniform_index(rng, words)));
    ex.query.markups.push_back(static_cast<std::uint8_t>(uniform_index(rng, kMarkupCount)));
  }
  const std::size_t nc = 3 + uniform_index(rng, 3);
  for (std::size_t c = 0; c < nc; ++c) {
    IndexedAnswer a;
    a.type = static_cast<std::uint32_t>(uniform_index(rng, types));
    const std::size_t pl = uniform_index(rng, 3);
    for (std::size_t k = 0; k < pl; ++k)
      a.path.push_back(static_cast<std::uint32_t>(uniform_index(rng, rels)));
    const std::size_t cn = 1 + uniform_index(rng, 6);
    for (std::size_t k = 0; k < cn; ++k) {
      a.context_words.push_back(static_cast<std::uint32_t>(uniform_index(rng, words)));
      a.context_markups.push_back(static_cast<std::uint8_t>(uniform_index(rng, kMarkupCount)));
    }
    ex.candidates.push_back(std::move(a));
  }
  ex.positives = {0};
  if (nc > 3) ex.positives.push_back(1);
  for (std::size_t c = ex.positives.size(); c < nc; ++c) ex.negatives.push_back(c);
  return ex;
}

}  // namespace

Result gradient_check(std::uint64_t seed, double eps, double tolerance) {
  EmbeddingModel model;
  model.config = ModelConfig{8, 40, 0.5};
  for (int i = 0; i < 10; ++i) model.vocab.add_word("w" + std::to_string(i));
  model.vocab.add_type("recipe");
  model.vocab.add_type("ingredient");
  model.vocab.add_relation("hasTag");
  model.vocab.add_relation("~hasTag");
  model.vocab.add_relation("hasIngredient");
  model.initialize(seed);

  Rng rng = make_rng(seed, "gradient-fixture");
  std::vector<TrainingExample> examples;
  std::vector<Triplet> triplets;
  for (std::size_t e = 0; e < 5; ++e) {
    examples.push_back(random_example(rng, model));
    for (auto p : examples.back().positives)
      for (auto n : examples.back().negatives) triplets.push_back({e, p, n});
  }

  Gradients grad;
  triplet_loss(model, examples, triplets, &grad);

  double worst = 0;
  std::size_t checked = 0, active_tables = 0;
  std::string where;
  for (std::size_t t = 0; t < kTableCount; ++t) {
    Matrix& table = model.tables[t];
    bool nonzero = false;
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto g = grad.get(static_cast<Table>(t), static_cast<std::uint32_t>(r));
      for (std::size_t c = 0; c < table.cols(); ++c) {
        const double saved = table.at(r, c);
        table.at(r, c) = saved + eps;
        const double up = triplet_loss(model, examples, triplets, nullptr);
        table.at(r, c) = saved - eps;
        const double down = triplet_loss(model, examples, triplets, nullptr);
        table.at(r, c) = saved;
        const double numeric = (up - down) / (2 * eps);
        const double analytic = g.empty() ? 0.0 : g[c];
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        const double err = scale < 1e-7 ? std::abs(analytic - numeric) : std::abs(analytic - numeric) / scale;
        nonzero = nonzero || std::abs(analytic) > 1e-7;
        if (err > worst) {
          worst = err;
          where = std::string(to_string(static_cast<Table>(t))) + "[" + std::to_string(r) + "," +
                  std::to_string(c) + "]";
        }
        ++checked;
      }
    }
    active_tables += nonzero;
  }
  const bool pass = worst <= tolerance && active_tables == kTableCount;
  return {pass, std::to_string(checked) + " parameters over " + std::to_string(active_tables) +
                    "/4 tables with gradient, max relative error " + fmt(worst) +
                    (where.empty() ? "" : " at " + where)};
}

Result select_answers_exactness(std::size_t vectors, std::uint64_t seed) {
  Rng rng = make_rng(seed, "select-answers");
  std::size_t wrong = 0, zero_theta = 0, ties = 0;
  for (std::size_t v = 0; v < vectors; ++v) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    const bool integral = uniform_real(rng) < 0.5;
    std::vector<ScoredAnswer> scored;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = integral ? static_cast<double>(uniform_index(rng, 5))
                                : uniform_real(rng, -10, 10);
      scored.push_back({"a" + std::to_string(uniform_index(rng, 1000000)) + "_" + std::to_string(i), s});
    }
    double theta;
    const double pick = uniform_real(rng);
    if (pick < 0.3) {
      theta = 0;
      ++zero_theta;
    } else if (pick < 0.5) {
      theta = 1;
    } else {
      theta = uniform_real(rng, 0, 8);
    }
    double best = scored[0].score;
    for (const auto& s : scored) best = std::max(best, s.score);
    std::vector<ScoredAnswer> want;
    for (const auto& s : scored)
      if (best - s.score <= theta) want.push_back(s);
    ties += want.size() > 1 && theta == 0;
    // Expected order: score descending, id ascending.
    std::sort(want.begin(), want.end(), [](const ScoredAnswer& a, const ScoredAnswer& b) {
      return a.score != b.score ? a.score > b.score : a.id < b.id;
    });
    const auto got = select_answers(scored, theta);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i)
      same = got[i].id == want[i].id && got[i].score == want[i].score;
    wrong += !same;
  }
  return {wrong == 0, std::to_string(vectors) + " vectors (" + std::to_string(zero_theta) +
                          " with theta=0, " + std::to_string(ties) + " of them tied), " +
                          std::to_string(wrong) + " wrong"};
}

namespace {

std::vector<std::string> order_by(const std::vector<std::string>& ids, const std::vector<double>& s) {
  std::vector<ScoredAnswer> v;
  for (std::size_t i = 0; i < ids.size(); ++i) v.push_back({ids[i], s[i]});
  sort_ranked(v);
  std::vector<std::string> out;
  for (const auto& a : v) out.push_back(a.id);
  return out;
}

}  // namespace

Result combined_score_properties(std::size_t inputs, std::uint64_t seed) {
  Rng rng = make_rng(seed, "combined-score");
  std::size_t out_of_range = 0;
  double lo = 1, hi = 0;
  for (std::size_t i = 0; i < inputs; ++i) {
    double q = uniform_real(rng), s = uniform_real(rng, -1, 1), l = uniform_real(rng);
    if (i % 10 == 0) q = uniform_index(rng, 2);
    if (i % 10 == 1) s = uniform_index(rng, 2) ? 1.0 : -1.0;
    if (i % 10 == 2) l = uniform_index(rng, 2);
    const double c = combined_score(q, s, l);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    out_of_range += !(c >= 0 && c <= 1);
  }
  std::size_t order_errors = 0;
  const std::size_t lists = 200;
  for (std::size_t k = 0; k < lists; ++k) {
    const std::size_t n = 2 + uniform_index(rng, 20);
    std::vector<std::string> ids;
    std::vector<double> raw, sim;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("recipe/" + std::to_string(uniform_index(rng, 100000)) + "-" + std::to_string(i));
      // Integer-valued scores make ties frequent.
      raw.push_back(k % 2 ? static_cast<double>(uniform_index(rng, 6)) : uniform_real(rng, 10, 40));
      sim.push_back(k % 2 ? static_cast<double>(uniform_index(rng, 5)) / 4.0 - 0.5
                          : uniform_real(rng, -1, 1));
    }
    const auto norm = normalize_scores(raw);
    std::vector<double> at0, at1;
    for (std::size_t i = 0; i < n; ++i) {
      at0.push_back(combined_score(norm[i], sim[i], 0.0));
      at1.push_back(combined_score(norm[i], sim[i], 1.0));
    }
    order_errors += order_by(ids, at0) != order_by(ids, raw);
    order_errors += order_by(ids, at1) != order_by(ids, sim);
  }
  return {out_of_range == 0 && order_errors == 0,
          std::to_string(inputs) + " inputs in [" + fmt(lo) + ", " + fmt(hi) + "], " +
              std::to_string(out_of_range) + " out of range; " + std::to_string(lists) +
              " lists, " + std::to_string(order_errors) + " order mismatches at lambda 0/1"};
}

Result metric_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {false, "cannot open " + path};
  const auto cases = nlohmann::json::parse(in);
  std::size_t wrong = 0;
  std::string first;
  for (const auto& c : cases) {
    const auto gold = c.at("gold").get<std::set<std::string>>();
    const auto pred = c.at("predicted").get<std::vector<std::string>>();
    const PRF p = question_prf(gold, pred);
    const APAR a = question_ap_ar(gold, pred);
    const double got[] = {p.precision, p.recall, p.f1, a.ap, a.ar};
    const char* keys[] = {"p", "r", "f1", "ap", "ar"};
    for (int k = 0; k < 5; ++k) {
      if (std::abs(got[k] - c.at(keys[k]).get<double>()) > 1e-9) {
        ++wrong;
        if (first.empty()) first = c.value("name", "?") + "." + keys[k];
      }
    }
  }
  return {wrong == 0 && cases.size() == 20,
          std::to_string(cases.size()) + " cases, " + std::to_string(wrong) + " wrong values" +
              (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace checks
