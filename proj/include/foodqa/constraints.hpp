#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "foodqa/kg.hpp"

namespace foodqa {

enum class ConstraintKind { positive_ingredient, negative_ingredient, nutrient_range, tag };
enum class ConstraintSource { query, preference, guideline };
enum class RangeMode { absolute_grams, percent_of_calories };

std::string_view to_string(ConstraintKind k);
std::string_view to_string(ConstraintSource s);
std::string_view to_string(RangeMode m);
ConstraintKind parse_constraint_kind(std::string_view s);
ConstraintSource parse_constraint_source(std::string_view s);
RangeMode parse_range_mode(std::string_view s);

// Structured nutrient budget. In absolute mode lo/hi are amounts in `unit`.
// In percent-of-calories mode lo/hi are fractions of total recipe calories,
// `unit` is the unit the multiplier applies to and `multiplier` is kcal per
// unit (9 for fat).
struct Guideline {
  std::string nutrient;
  RangeMode mode = RangeMode::absolute_grams;
  double lo = 0.0;
  double hi = 0.0;
  std::string unit = "g";
  std::optional<double> multiplier;

  void validate() const;
  // "carbohydrates with desired range 5g to 30g" / "... 20% to 35%".
  std::string phrase() const;
  // Closed-interval indicator. `amount` is in `amount_unit`; `total_kcal` is
  // needed in percent mode. nullopt when units cannot be reconciled or the
  // calorie total is missing / non-positive.
  std::optional<bool> admits(double amount, std::string_view amount_unit,
                             std::optional<double> total_kcal) const;

  bool operator==(const Guideline&) const = default;
};

struct Constraint {
  ConstraintKind kind = ConstraintKind::tag;
  std::string subject;
  std::optional<Guideline> range;
  ConstraintSource source = ConstraintSource::query;
  // "low" / "medium" / "high" for nutrient limits stated in the query.
  std::string qualifier;

  void validate() const;
  MarkupTag polarity() const {
    return kind == ConstraintKind::negative_ingredient ? MarkupTag::negative
                                                       : MarkupTag::positive;
  }
  // Label written onto a literal node that satisfies this range constraint.
  std::string phrase() const;

  static Constraint tag(std::string label, ConstraintSource src = ConstraintSource::query);
  static Constraint ingredient(std::string label, bool positive, ConstraintSource src);
  static Constraint from_guideline(const Guideline& g,
                                   ConstraintSource src = ConstraintSource::guideline);

  bool operator==(const Constraint&) const = default;
};

struct Persona {
  std::vector<std::string> likes;
  std::vector<std::string> dislikes;
  std::vector<Guideline> guidelines;

  // likes and dislikes disjoint, every guideline valid. `max_guidelines`
  // bounds the list (the benchmark uses 1..3; free-form personas may be empty).
  void validate(std::size_t max_guidelines = 3) const;
  bool empty() const { return likes.empty() && dislikes.empty() && guidelines.empty(); }
  // likes (positive), dislikes (negative), guidelines in that order.
  std::vector<Constraint> constraints() const;

  bool operator==(const Persona&) const = default;
};

struct ThresholdBand {
  double lo = 0.0;
  double hi = 0.0;
};

// low / medium / high bands per nutrient, in grams per recipe. The benchmark
// generator and the gold oracle read the same table.
class ThresholdTable {
 public:
  static ThresholdTable defaults();
  static ThresholdTable from_json(const nlohmann::json& j);
  static ThresholdTable load(const std::string& path);
  nlohmann::json to_json() const;

  std::vector<std::string> nutrients() const;
  std::vector<std::string> levels(std::string_view nutrient) const;
  const std::string& unit() const { return unit_; }
  // Query-sourced nutrient-range constraint such as "low fat".
  Constraint make_constraint(std::string_view level, std::string_view nutrient) const;

 private:
  std::string unit_ = "g";
  std::map<std::string, std::map<std::string, ThresholdBand>> bands_;
};

std::optional<double> convert_unit(double value, std::string_view from,
                                   std::string_view to);

// Symbolic constraint evaluation over the KG facts of one recipe. A missing
// nutrient literal fails the constraint.
bool satisfies(const KnowledgeGraph& kg, EntityIndex recipe, const Constraint& c);
std::vector<bool> satisfaction(const KnowledgeGraph& kg, EntityIndex recipe,
                               std::span<const Constraint> constraints);

void to_json(nlohmann::json& j, const Guideline& g);
void from_json(const nlohmann::json& j, Guideline& g);
void to_json(nlohmann::json& j, const Constraint& c);
void from_json(const nlohmann::json& j, Constraint& c);
void to_json(nlohmann::json& j, const Persona& p);
void from_json(const nlohmann::json& j, Persona& p);

std::vector<Guideline> load_guideline_table(const std::string& path);
Persona load_persona(const std::string& path);

}  // namespace foodqa
