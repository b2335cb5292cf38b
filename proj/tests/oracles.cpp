#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "foodqa/text.hpp"

namespace oracle {

using namespace foodqa;

std::set<EntityIndex> bfs_entities(const KnowledgeGraph& kg, EntityIndex topic, int hops) {
  std::set<EntityIndex> seen{topic};
  std::vector<EntityIndex> frontier{topic};
  for (int h = 0; h < hops; ++h) {
    std::set<EntityIndex> next;
    for (const auto& t : kg.triples()) {
      for (EntityIndex u : frontier) {
        if (t.subject == u && !seen.contains(t.object)) next.insert(t.object);
        if (t.object == u && !seen.contains(t.subject)) next.insert(t.subject);
      }
    }
    seen.insert(next.begin(), next.end());
    frontier.assign(next.begin(), next.end());
  }
  return seen;
}

namespace {

std::optional<double> to_base(double v, const std::string& unit, const std::string& want) {
  static const std::map<std::string, std::pair<int, double>> units{
      {"g", {0, 1.0}},   {"mg", {0, 0.001}},  {"mcg", {0, 0.000001}},
      {"kg", {0, 1000}}, {"kcal", {1, 1.0}}, {"kj", {1, 1.0 / 4.184}}};
  const std::string a = to_lower(unit), b = to_lower(want);
  if (a == b) return v;
  auto ia = units.find(a), ib = units.find(b);
  if (ia == units.end() || ib == units.end() || ia->second.first != ib->second.first)
    return std::nullopt;
  return v * ia->second.second / ib->second.second;
}

const Entity* literal_of(const KnowledgeGraph& kg, EntityIndex recipe, const std::string& nutrient) {
  for (const auto& t : kg.triples()) {
    if (t.subject != recipe || kg.relation(t.predicate) != "hasNutrient") continue;
    const Entity& o = kg.entity(t.object);
    if (o.literal && o.literal->nutrient == nutrient) return &o;
  }
  return nullptr;
}

bool linked(const KnowledgeGraph& kg, EntityIndex recipe, std::string_view pred,
            const std::string& label) {
  for (const auto& t : kg.triples()) {
    if (t.subject == recipe && kg.relation(t.predicate) == pred &&
        kg.entity(t.object).label == label)
      return true;
  }
  return false;
}

}  // namespace

bool satisfies(const KnowledgeGraph& kg, EntityIndex recipe, const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::tag: return linked(kg, recipe, "hasTag", c.subject);
    case ConstraintKind::positive_ingredient: return linked(kg, recipe, "hasIngredient", c.subject);
    case ConstraintKind::negative_ingredient: return !linked(kg, recipe, "hasIngredient", c.subject);
    case ConstraintKind::nutrient_range: {
      const Entity* lit = literal_of(kg, recipe, c.subject);
      if (lit == nullptr) return false;
      const Guideline& g = *c.range;
      const auto v = to_base(lit->literal->value, lit->literal->unit, g.unit);
      if (!v) return false;
      if (g.mode == RangeMode::absolute_grams) return *v >= g.lo && *v <= g.hi;
      const Entity* cal = literal_of(kg, recipe, "calories");
      if (cal == nullptr) return false;
      const auto kcal = to_base(cal->literal->value, cal->literal->unit, "kcal");
      if (!kcal || *kcal <= 0) return false;
      const double share = *v * *g.multiplier / *kcal;
      return share >= g.lo && share <= g.hi;
    }
  }
  return false;
}

std::vector<std::string> gold(const KnowledgeGraph& kg, std::span<const EntityIndex> entities,
                              std::span<const Constraint> constraints) {
  std::vector<std::string> out;
  for (EntityIndex e : entities) {
    if (kg.entity(e).type != EntityType::recipe) continue;
    bool ok = true;
    for (const auto& c : constraints) ok = ok && oracle::satisfies(kg, e, c);
    if (ok) out.push_back(kg.entity(e).id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// 1-based rank of each gold item at its first occurrence, ascending.
std::vector<std::size_t> hit_ranks(const std::set<std::string>& gold,
                                   const std::vector<std::string>& predicted) {
  std::vector<std::size_t> ranks;
  for (const auto& g : gold) {
    auto it = std::find(predicted.begin(), predicted.end(), g);
    if (it != predicted.end()) ranks.push_back(static_cast<std::size_t>(it - predicted.begin()) + 1);
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

}  // namespace

PRF prf(const std::set<std::string>& gold, const std::vector<std::string>& predicted) {
  PRF r;
  if (gold.empty() || predicted.empty()) return r;
  const double hits = static_cast<double>(hit_ranks(gold, predicted).size());
  r.precision = hits / static_cast<double>(predicted.size());
  r.recall = hits / static_cast<double>(gold.size());
  r.f1 = hits == 0 ? 0.0 : 2.0 * hits / static_cast<double>(predicted.size() + gold.size());
  return r;
}

APAR ap_ar(const std::set<std::string>& gold, const std::vector<std::string>& predicted) {
  APAR r;
  if (gold.empty() || predicted.empty()) return r;
  const auto ranks = hit_ranks(gold, predicted);
  const double n = static_cast<double>(predicted.size());
  const double g = static_cast<double>(gold.size());
  for (std::size_t j = 0; j < ranks.size(); ++j) {
    r.ap += static_cast<double>(j + 1) / static_cast<double>(ranks[j]);
    // A hit at rank p counts towards the recall of cutoffs p..n.
    r.ar += (n - static_cast<double>(ranks[j]) + 1.0) / g;
  }
  r.ap /= g;
  r.ar /= n;
  return r;
}

KnowledgeGraph mixed_unit_kg(std::uint64_t seed, std::size_t n_recipes) {
  Rng rng = make_rng(seed, "mixed-unit-kg");
  static const char* tags[] = {"breakfast", "lunch", "dinner", "snack"};
  static const char* ingredients[] = {"bread", "white bread", "eggs", "milk", "oat milk",
                                      "rice", "brown rice", "chicken", "tofu", "spinach",
                                      "peanut butter", "butter", "salt", "honey"};
  KnowledgeGraph::Builder b;
  for (std::size_t r = 0; r < n_recipes; ++r) {
    const auto rid = b.add_entity("r/" + std::to_string(r), "dish " + std::to_string(r),
                                  EntityType::recipe);
    const std::size_t nt = 1 + uniform_index(rng, 2);
    for (std::size_t k = 0; k < nt; ++k) {
      const std::string t = tags[uniform_index(rng, 4)];
      b.add_triple(rid, "hasTag", b.add_entity("tag/" + t, t, EntityType::tag));
    }
    const std::size_t ni = 2 + uniform_index(rng, 5);
    for (std::size_t k = 0; k < ni; ++k) {
      const std::string i = ingredients[uniform_index(rng, std::size(ingredients))];
      b.add_triple(rid, "hasIngredient", b.add_entity("ing/" + i, i, EntityType::ingredient));
    }
    const double fat = std::round(uniform_real(rng, 0, 40) * 10) / 10;
    const double carbs = std::round(uniform_real(rng, 0, 90) * 10) / 10;
    const double protein = std::round(uniform_real(rng, 0, 40) * 10) / 10;
    const bool mg = uniform_real(rng) < 0.3;
    b.add_triple(rid, "hasNutrient", b.add_literal(rid, mg ? fat * 1000 : fat, mg ? "mg" : "g", "fat"));
    b.add_triple(rid, "hasNutrient", b.add_literal(rid, carbs, "g", "carbohydrates"));
    b.add_triple(rid, "hasNutrient", b.add_literal(rid, protein, "g", "protein"));
    if (uniform_real(rng) < 0.9) {
      const double kcal = 9 * fat + 4 * carbs + 4 * protein + uniform_real(rng, 0, 50);
      const bool kj = uniform_real(rng) < 0.3;
      b.add_triple(rid, "hasNutrient",
                   b.add_literal(rid, kj ? kcal * 4.184 : kcal, kj ? "kJ" : "kcal", "calories"));
    }
  }
  return std::move(b).build();
}

std::vector<Constraint> random_constraints(const KnowledgeGraph& kg,
                                           std::span<const EntityIndex> entities,
                                           const std::string& tag_label, Rng& rng) {
  std::vector<std::string> present;
  for (EntityIndex e : entities)
    if (kg.entity(e).type == EntityType::ingredient) present.push_back(kg.entity(e).label);
  std::vector<Constraint> out{Constraint::tag(tag_label)};
  const std::size_t n = 1 + uniform_index(rng, 5);
  static const char* nutrients[] = {"fat", "carbohydrates", "protein"};
  for (std::size_t k = 0; k < n; ++k) {
    const double pick = uniform_real(rng);
    if (pick < 0.5) {
      std::string label = present.empty() || uniform_real(rng) < 0.1
                              ? "unobtainium"
                              : present[uniform_index(rng, present.size())];
      out.push_back(Constraint::ingredient(label, uniform_real(rng) < 0.5,
                                           uniform_real(rng) < 0.5 ? ConstraintSource::query
                                                                   : ConstraintSource::preference));
    } else {
      Guideline g;
      g.nutrient = nutrients[uniform_index(rng, 3)];
      if (pick < 0.75) {
        g.mode = RangeMode::absolute_grams;
        g.lo = std::round(uniform_real(rng, 0, 30));
        g.hi = g.lo + std::round(uniform_real(rng, 0, 40));
        g.unit = uniform_real(rng) < 0.2 ? "mg" : "g";
        if (g.unit == "mg") {
          g.lo *= 1000;
          g.hi *= 1000;
        }
      } else {
        g.mode = RangeMode::percent_of_calories;
        g.lo = std::round(uniform_real(rng, 0, 50)) / 100;
        g.hi = g.lo + std::round(uniform_real(rng, 0, 50)) / 100;
        g.multiplier = g.nutrient == "fat" ? 9.0 : 4.0;
      }
      out.push_back(Constraint::from_guideline(g));
    }
  }
  return out;
}

}  // namespace oracle
