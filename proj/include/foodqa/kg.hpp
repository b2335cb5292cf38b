#pragma once

// Immutable food knowledge graph: recipes, tags, ingredients, nutrient names
// and per-recipe nutrient literal nodes, plus h-hop subgraph extraction and
// candidate answer enumeration.
//
// TSV format, one record per line (UTF-8, LF):
//   #entity <TAB> id <TAB> label <TAB> entity_type
//   subject <TAB> predicate <TAB> object_id
//   subject <TAB> predicate <TAB> "<value> <unit>" <TAB> nutrient
// Other lines starting with '#' are comments. Ids that are not declared are
// created on first use when the predicate determines their type (hasTag,
// hasIngredient, hasNutrient); a literal object becomes its own node with id
// "<subject>#<nutrient>".

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace foodqa {

using EntityIndex = std::uint32_t;
using TripleIndex = std::uint32_t;
using RelationIndex = std::uint16_t;

enum class EntityType { recipe, tag, ingredient, nutrient_name, literal };
inline constexpr std::size_t kEntityTypeCount = 5;

std::string_view to_string(EntityType type);
EntityType parse_entity_type(std::string_view s);

namespace predicates {
inline constexpr std::string_view has_tag = "hasTag";
inline constexpr std::string_view has_ingredient = "hasIngredient";
inline constexpr std::string_view has_nutrient = "hasNutrient";
}  // namespace predicates

struct NumericLiteral {
  double value = 0.0;
  std::string unit;
  std::string nutrient;
};

struct Entity {
  std::string id;
  std::string label;
  EntityType type = EntityType::ingredient;
  std::optional<NumericLiteral> literal;
};

struct Triple {
  EntityIndex subject = 0;
  RelationIndex predicate = 0;
  EntityIndex object = 0;

  auto operator<=>(const Triple&) const = default;
};

struct Edge {
  TripleIndex triple;
  EntityIndex other;
  bool inverse;  // true when traversed object -> subject
};

struct LoadReport {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t triples = 0;
  std::size_t duplicate_triples = 0;
};

class KnowledgeGraph {
 public:
  class Builder;

  KnowledgeGraph() = default;

  std::span<const Entity> entities() const { return entities_; }
  std::span<const Triple> triples() const { return triples_; }
  std::span<const std::string> relations() const { return relations_; }

  const Entity& entity(EntityIndex i) const { return entities_.at(i); }
  const Triple& triple(TripleIndex i) const { return triples_.at(i); }
  const std::string& relation(RelationIndex r) const { return relations_.at(r); }

  std::optional<EntityIndex> find(std::string_view id) const;
  std::optional<RelationIndex> find_relation(std::string_view name) const;
  EntityIndex require(std::string_view id) const;

  std::span<const Edge> edges(EntityIndex e) const {
    return {adjacency_.data() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }

  std::vector<EntityIndex> entities_of_type(EntityType type) const;
  std::optional<EntityIndex> find_by_label(EntityType type,
                                           std::string_view label) const;

  // Recipe facts, resolved through outgoing edges.
  std::vector<EntityIndex> ingredients_of(EntityIndex recipe) const;
  std::vector<EntityIndex> tags_of(EntityIndex recipe) const;
  std::vector<EntityIndex> nutrients_of(EntityIndex recipe) const;
  std::vector<EntityIndex> recipes_with_tag(EntityIndex tag) const;
  std::optional<EntityIndex> nutrient_literal(EntityIndex recipe,
                                              std::string_view nutrient) const;
  // Recipe that owns a literal node.
  std::optional<EntityIndex> literal_owner(EntityIndex literal) const;

  std::string summary() const;

 private:
  void index();

  std::vector<Entity> entities_;
  std::vector<Triple> triples_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, EntityIndex> by_id_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Edge> adjacency_;
};

class KnowledgeGraph::Builder {
 public:
  // Returns the existing index when the id is already present with the same
  // type; throws DataError on a conflicting redeclaration.
  EntityIndex add_entity(std::string id, std::string label, EntityType type);
  EntityIndex add_literal(EntityIndex recipe, double value, std::string unit,
                          std::string nutrient);
  // Returns false when the triple already exists.
  bool add_triple(EntityIndex subject, std::string_view predicate,
                  EntityIndex object);
  std::optional<EntityIndex> find(std::string_view id) const;
  const Entity& entity(EntityIndex i) const { return entities_.at(i); }

  KnowledgeGraph build() &&;

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, EntityIndex> by_id_;
  std::vector<std::string> relations_;
  std::vector<Triple> triples_;
  std::set<Triple> seen_;
};

std::string literal_label(double value, std::string_view unit);

KnowledgeGraph load_kg(const std::string& path, LoadReport* report = nullptr);
KnowledgeGraph parse_kg(std::istream& in, LoadReport* report = nullptr);
void save_kg(const KnowledgeGraph& kg, std::ostream& out,
             std::string_view header_comment = {});
void save_kg(const KnowledgeGraph& kg, const std::string& path,
             std::string_view header_comment = {});

// Sorted (subject id, predicate, object id) strings; used to compare graphs.
std::vector<std::string> triple_strings(const KnowledgeGraph& kg);

// h-hop neighbourhood of a topic entity with optional label rewrites applied
// by KG augmentation. Holds a non-owning pointer: the parent graph must
// outlive it.
class Subgraph {
 public:
  Subgraph(const KnowledgeGraph& kg, EntityIndex topic, int hops,
           std::vector<EntityIndex> entities);

  const KnowledgeGraph& kg() const { return *kg_; }
  EntityIndex topic() const { return topic_; }
  int hops() const { return hops_; }
  std::span<const EntityIndex> entities() const { return entities_; }
  std::span<const TripleIndex> triples() const { return triples_; }
  bool contains(EntityIndex e) const;

  // Effective label: the augmented rewrite if present, else the KG label.
  const std::string& label(EntityIndex e) const;
  bool is_augmented(EntityIndex e) const { return augmented_.contains(e); }
  void set_augmented_label(EntityIndex e, std::string label);
  const std::map<EntityIndex, std::string>& label_overrides() const {
    return overrides_;
  }

  // Adds entities and recomputes the induced triple set.
  void add_entities(std::span<const EntityIndex> extra);

  std::vector<EntityIndex> recipes() const;

  bool operator==(const Subgraph& o) const {
    return kg_ == o.kg_ && topic_ == o.topic_ && hops_ == o.hops_ &&
           entities_ == o.entities_ && triples_ == o.triples_ &&
           overrides_ == o.overrides_;
  }

 private:
  void induce_triples();

  const KnowledgeGraph* kg_;
  EntityIndex topic_;
  int hops_;
  std::vector<EntityIndex> entities_;  // sorted
  std::vector<TripleIndex> triples_;   // sorted
  std::map<EntityIndex, std::string> overrides_;
  std::set<EntityIndex> augmented_;
};

Subgraph extract_subgraph(const KnowledgeGraph& kg, EntityIndex topic,
                          int hops = 2);

enum class MarkupTag : std::uint8_t { padding = 0, positive = 1, negative = 2 };
inline constexpr std::size_t kMarkupCount = 3;
std::string_view to_string(MarkupTag m);

struct PathStep {
  std::string relation;
  bool inverse = false;

  // "~rel" for an inverse traversal.
  std::string token() const;
  auto operator<=>(const PathStep&) const = default;
};

struct ContextWord {
  std::string word;
  MarkupTag markup = MarkupTag::padding;
  EntityIndex node = 0;
};

struct CandidateAnswer {
  EntityIndex node = 0;
  EntityType answer_type = EntityType::recipe;
  std::vector<PathStep> answer_path;
  std::vector<ContextWord> answer_context;
};

// One candidate per recipe in the subgraph, ordered by entity id. The path is
// the shortest undirected relation path from the topic (lexicographically
// smallest on ties); empty when the recipe is unreachable inside `sub`.
std::vector<CandidateAnswer> enumerate_candidates(const Subgraph& sub);

}  // namespace foodqa
