#include "foodqa/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "foodqa/error.hpp"
#include "foodqa/synthetic_kg.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::string_view (&names)[N],
             const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw DataError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::string_view kKinds[] = {"positive-ingredient",
                                       "negative-ingredient", "nutrient-range",
                                       "tag"};
constexpr std::string_view kSources[] = {"query", "preference", "guideline"};
constexpr std::string_view kModes[] = {"absolute-grams", "percent-of-calories"};

std::string tidy(double v) { return format_number(std::round(v * 1e6) / 1e6); }

struct UnitScale {
  std::string_view name;
  std::string_view dimension;
  double scale;  // in base units (g, kcal)
};
constexpr UnitScale kUnits[] = {{"g", "mass", 1.0},      {"mg", "mass", 1e-3},
                                {"mcg", "mass", 1e-6},   {"kg", "mass", 1e3},
                                {"kcal", "energy", 1.0}, {"kj", "energy", 1.0 / 4.184}};

const UnitScale* find_unit(std::string_view u) {
  const std::string lower = to_lower(u);
  for (const auto& s : kUnits) {
    if (s.name == lower) return &s;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(ConstraintKind k) { return kKinds[static_cast<int>(k)]; }
std::string_view to_string(ConstraintSource s) { return kSources[static_cast<int>(s)]; }
std::string_view to_string(RangeMode m) { return kModes[static_cast<int>(m)]; }
ConstraintKind parse_constraint_kind(std::string_view s) {
  return parse_enum<ConstraintKind>(s, kKinds, "constraint kind");
}
ConstraintSource parse_constraint_source(std::string_view s) {
  return parse_enum<ConstraintSource>(s, kSources, "constraint source");
}
RangeMode parse_range_mode(std::string_view s) {
  return parse_enum<RangeMode>(s, kModes, "guideline mode");
}

std::optional<double> convert_unit(double value, std::string_view from,
                                   std::string_view to) {
  if (to_lower(from) == to_lower(to)) return value;
  const auto* f = find_unit(from);
  const auto* t = find_unit(to);
  if (!f || !t || f->dimension != t->dimension) return std::nullopt;
  return value * f->scale / t->scale;
}

// --------------------------------------------------------------- Guideline

void Guideline::validate() const {
  if (nutrient.empty()) throw DataError("guideline without nutrient");
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0 || lo > hi) {
    throw DataError("guideline for " + nutrient + " needs 0 <= lo <= hi");
  }
  if (unit.empty()) throw DataError("guideline for " + nutrient + " has no unit");
  if (mode == RangeMode::percent_of_calories &&
      (!multiplier || !(*multiplier > 0))) {
    throw DataError("percent-of-calories guideline for " + nutrient +
                    " needs multiplier > 0");
  }
}

std::string Guideline::phrase() const {
  if (mode == RangeMode::percent_of_calories) {
    return nutrient + " with desired range " + tidy(lo * 100) + "% to " +
           tidy(hi * 100) + "%";
  }
  return nutrient + " with desired range " + tidy(lo) + unit + " to " +
         tidy(hi) + unit;
}

std::optional<bool> Guideline::admits(double amount,
                                      std::string_view amount_unit,
                                      std::optional<double> total_kcal) const {
  const auto v = convert_unit(amount, amount_unit, unit);
  if (!v) return std::nullopt;
  if (mode == RangeMode::absolute_grams) return lo <= *v && *v <= hi;
  if (!total_kcal || !(*total_kcal > 0)) return std::nullopt;
  const double share = *v * multiplier.value_or(0.0) / *total_kcal;
  return lo <= share && share <= hi;
}

// -------------------------------------------------------------- Constraint

void Constraint::validate() const {
  if (subject.empty()) throw DataError("constraint without subject");
  if (kind == ConstraintKind::nutrient_range) {
    if (!range) throw DataError("nutrient-range constraint without range");
    range->validate();
  } else if (range) {
    throw DataError("only nutrient-range constraints carry a range");
  }
}

std::string Constraint::phrase() const {
  if (kind != ConstraintKind::nutrient_range) return subject;
  if (!qualifier.empty()) return qualifier + " " + subject;
  return range->phrase();
}

Constraint Constraint::tag(std::string label, ConstraintSource src) {
  return {ConstraintKind::tag, std::move(label), std::nullopt, src, {}};
}

Constraint Constraint::ingredient(std::string label, bool positive,
                                  ConstraintSource src) {
  return {positive ? ConstraintKind::positive_ingredient
                   : ConstraintKind::negative_ingredient,
          std::move(label), std::nullopt, src, {}};
}

Constraint Constraint::from_guideline(const Guideline& g, ConstraintSource src) {
  return {ConstraintKind::nutrient_range, g.nutrient, g, src, {}};
}

// ----------------------------------------------------------------- Persona

void Persona::validate(std::size_t max_guidelines) const {
  std::set<std::string> l(likes.begin(), likes.end());
  for (const auto& d : dislikes) {
    if (l.contains(d)) throw DataError("persona likes and dislikes '" + d + "'");
  }
  if (guidelines.size() > max_guidelines) {
    throw DataError("persona has too many guidelines");
  }
  for (const auto& g : guidelines) g.validate();
}

std::vector<Constraint> Persona::constraints() const {
  std::vector<Constraint> out;
  for (const auto& l : likes) {
    out.push_back(Constraint::ingredient(l, true, ConstraintSource::preference));
  }
  for (const auto& d : dislikes) {
    out.push_back(Constraint::ingredient(d, false, ConstraintSource::preference));
  }
  for (const auto& g : guidelines) out.push_back(Constraint::from_guideline(g));
  return out;
}

// ---------------------------------------------------------- ThresholdTable

ThresholdTable ThresholdTable::defaults() {
  ThresholdTable t;
  t.bands_["fat"] = {{"low", {0, 10}}, {"medium", {10, 25}}, {"high", {25, 1000}}};
  t.bands_["protein"] = {{"low", {0, 10}}, {"medium", {10, 25}}, {"high", {25, 1000}}};
  t.bands_["carbohydrates"] = {
      {"low", {0, 20}}, {"medium", {20, 50}}, {"high", {50, 1000}}};
  return t;
}

ThresholdTable ThresholdTable::from_json(const nlohmann::json& j) {
  ThresholdTable t;
  t.unit_ = j.value("unit", std::string("g"));
  for (const auto& [nutrient, levels] : j.at("bands").items()) {
    for (const auto& [level, band] : levels.items()) {
      ThresholdBand b{band.at(0).get<double>(), band.at(1).get<double>()};
      if (!(b.lo <= b.hi) || b.lo < 0) {
        throw DataError("threshold band " + level + " " + nutrient +
                        " needs 0 <= lo <= hi");
      }
      t.bands_[nutrient][level] = b;
    }
  }
  if (t.bands_.empty()) throw DataError("threshold table is empty");
  return t;
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open threshold file '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("threshold file '" + path + "': " + e.what());
  }
}

nlohmann::json ThresholdTable::to_json() const {
  nlohmann::json j;
  j["unit"] = unit_;
  for (const auto& [n, levels] : bands_) {
    for (const auto& [l, b] : levels) j["bands"][n][l] = {b.lo, b.hi};
  }
  return j;
}

std::vector<std::string> ThresholdTable::nutrients() const {
  std::vector<std::string> out;
  for (const auto& [n, _] : bands_) out.push_back(n);
  return out;
}

std::vector<std::string> ThresholdTable::levels(std::string_view nutrient) const {
  std::vector<std::string> out;
  auto it = bands_.find(std::string(nutrient));
  if (it == bands_.end()) return out;
  for (const auto& [l, _] : it->second) out.push_back(l);
  return out;
}

Constraint ThresholdTable::make_constraint(std::string_view level,
                                           std::string_view nutrient) const {
  auto it = bands_.find(std::string(nutrient));
  if (it == bands_.end()) {
    throw DataError("no threshold bands for nutrient '" + std::string(nutrient) + "'");
  }
  auto bit = it->second.find(std::string(level));
  if (bit == it->second.end()) {
    throw DataError("no '" + std::string(level) + "' band for " + std::string(nutrient));
  }
  Guideline g{std::string(nutrient), RangeMode::absolute_grams, bit->second.lo,
              bit->second.hi, unit_, std::nullopt};
  Constraint c = Constraint::from_guideline(g, ConstraintSource::query);
  c.qualifier = std::string(level);
  return c;
}

// -------------------------------------------------------------- evaluation

bool satisfies(const KnowledgeGraph& kg, EntityIndex recipe, const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::tag: {
      for (auto t : kg.tags_of(recipe)) {
        if (kg.entity(t).label == c.subject) return true;
      }
      return false;
    }
    case ConstraintKind::positive_ingredient:
    case ConstraintKind::negative_ingredient: {
      bool present = false;
      for (auto i : kg.ingredients_of(recipe)) {
        if (kg.entity(i).label == c.subject) present = true;
      }
      return present == (c.kind == ConstraintKind::positive_ingredient);
    }
    case ConstraintKind::nutrient_range: {
      const auto lit = kg.nutrient_literal(recipe, c.subject);
      if (!lit || !c.range) return false;
      std::optional<double> kcal;
      if (auto cal = kg.nutrient_literal(recipe, nutrients::calories)) {
        const auto& cl = *kg.entity(*cal).literal;
        kcal = convert_unit(cl.value, cl.unit, "kcal");
      }
      const auto& l = *kg.entity(*lit).literal;
      return c.range->admits(l.value, l.unit, kcal).value_or(false);
    }
  }
  return false;
}

std::vector<bool> satisfaction(const KnowledgeGraph& kg, EntityIndex recipe,
                               std::span<const Constraint> constraints) {
  std::vector<bool> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) out.push_back(satisfies(kg, recipe, c));
  return out;
}

// -------------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const Guideline& g) {
  j = {{"nutrient", g.nutrient}, {"mode", to_string(g.mode)}, {"lo", g.lo},
       {"hi", g.hi},             {"unit", g.unit}};
  if (g.multiplier) j["multiplier"] = *g.multiplier;
}

void from_json(const nlohmann::json& j, Guideline& g) {
  g.nutrient = j.at("nutrient").get<std::string>();
  g.mode = parse_range_mode(j.at("mode").get<std::string>());
  g.lo = j.at("lo").get<double>();
  g.hi = j.at("hi").get<double>();
  g.unit = j.value("unit", std::string("g"));
  g.multiplier.reset();
  if (j.contains("multiplier") && !j["multiplier"].is_null()) {
    g.multiplier = j["multiplier"].get<double>();
  }
  g.validate();
}

void to_json(nlohmann::json& j, const Constraint& c) {
  j = {{"kind", to_string(c.kind)}, {"subject", c.subject},
       {"source", to_string(c.source)}};
  if (c.range) {
    j["range"] = {{"lo", c.range->lo}, {"hi", c.range->hi}, {"unit", c.range->unit},
                  {"mode", to_string(c.range->mode)}};
    if (c.range->multiplier) j["range"]["multiplier"] = *c.range->multiplier;
  }
  if (!c.qualifier.empty()) j["qualifier"] = c.qualifier;
}

void from_json(const nlohmann::json& j, Constraint& c) {
  c.kind = parse_constraint_kind(j.at("kind").get<std::string>());
  c.subject = j.at("subject").get<std::string>();
  c.source = parse_constraint_source(j.at("source").get<std::string>());
  c.qualifier = j.value("qualifier", std::string());
  c.range.reset();
  if (j.contains("range")) {
    const auto& r = j["range"];
    Guideline g;
    g.nutrient = c.subject;
    g.mode = parse_range_mode(r.value("mode", std::string("absolute-grams")));
    g.lo = r.at("lo").get<double>();
    g.hi = r.at("hi").get<double>();
    g.unit = r.value("unit", std::string("g"));
    if (r.contains("multiplier")) g.multiplier = r["multiplier"].get<double>();
    c.range = g;
  }
  c.validate();
}

void to_json(nlohmann::json& j, const Persona& p) {
  j = {{"likes", p.likes}, {"dislikes", p.dislikes}, {"guidelines", p.guidelines}};
}

void from_json(const nlohmann::json& j, Persona& p) {
  p.likes = j.value("likes", std::vector<std::string>{});
  p.dislikes = j.value("dislikes", std::vector<std::string>{});
  p.guidelines.clear();
  if (j.contains("guidelines")) p.guidelines = j["guidelines"].get<std::vector<Guideline>>();
  for (auto& s : p.likes) s = to_lower(s);
  for (auto& s : p.dislikes) s = to_lower(s);
}

std::vector<Guideline> load_guideline_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open guideline file '" + path + "'");
  try {
    auto table = nlohmann::json::parse(in).get<std::vector<Guideline>>();
    if (table.empty()) throw DataError("guideline table is empty");
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("guideline file '" + path + "': " + e.what());
  }
}

Persona load_persona(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open persona file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  try {
    Persona p = nlohmann::json::parse(text).get<Persona>();
    p.validate(std::max<std::size_t>(p.guidelines.size(), 3));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("persona file '" + path + "': " + e.what());
  }
}

}  // namespace foodqa
