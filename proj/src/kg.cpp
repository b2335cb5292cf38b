#include "foodqa/kg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "foodqa/error.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

constexpr std::string_view kEntityTypeNames[] = {"recipe", "tag", "ingredient",
                                                 "nutrient-name", "literal"};

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string label_from_id(std::string_view id) {
  const auto cut = id.find_last_of("/:");
  std::string label(cut == std::string_view::npos ? id : id.substr(cut + 1));
  std::replace(label.begin(), label.end(), '_', ' ');
  return to_lower(label);
}

std::string nutrient_entity_id(std::string_view nutrient) {
  return "nutrient/" + std::string(nutrient);
}

}  // namespace

std::string_view to_string(EntityType type) {
  return kEntityTypeNames[static_cast<std::size_t>(type)];
}

EntityType parse_entity_type(std::string_view s) {
  for (std::size_t i = 0; i < kEntityTypeCount; ++i) {
    if (kEntityTypeNames[i] == s) return static_cast<EntityType>(i);
  }
  throw DataError("unknown entity type '" + std::string(s) + "'");
}

std::string_view to_string(MarkupTag m) {
  switch (m) {
    case MarkupTag::positive:
      return "positive";
    case MarkupTag::negative:
      return "negative";
    case MarkupTag::padding:
      break;
  }
  return "padding";
}

std::string PathStep::token() const {
  return inverse ? "~" + relation : relation;
}

std::string literal_label(double value, std::string_view unit) {
  return format_number(value) + " " + std::string(unit);
}

// ---------------------------------------------------------------- Builder

EntityIndex KnowledgeGraph::Builder::add_entity(std::string id,
                                                std::string label,
                                                EntityType type) {
  if (id.empty()) throw DataError("empty entity id");
  if (label.empty()) throw DataError("empty label for entity '" + id + "'");
  if (auto it = by_id_.find(id); it != by_id_.end()) {
    if (entities_[it->second].type != type) {
      throw DataError("entity '" + id + "' redeclared with a different type");
    }
    return it->second;
  }
  const auto idx = static_cast<EntityIndex>(entities_.size());
  by_id_.emplace(id, idx);
  entities_.push_back({std::move(id), std::move(label), type, std::nullopt});
  return idx;
}

EntityIndex KnowledgeGraph::Builder::add_literal(EntityIndex recipe,
                                                 double value,
                                                 std::string unit,
                                                 std::string nutrient) {
  if (!std::isfinite(value)) throw DataError("non-finite literal value");
  if (unit.empty()) throw DataError("literal without unit");
  if (nutrient.empty()) throw DataError("literal without nutrient name");
  add_entity(nutrient_entity_id(nutrient), nutrient, EntityType::nutrient_name);
  std::string id = entities_.at(recipe).id + "#" + nutrient;
  if (auto it = by_id_.find(id); it != by_id_.end()) {
    const auto& lit = entities_[it->second].literal;
    if (!lit || lit->value != value || lit->unit != unit) {
      throw DataError("conflicting literal values for '" + id + "'");
    }
    return it->second;
  }
  const auto idx = static_cast<EntityIndex>(entities_.size());
  by_id_.emplace(id, idx);
  entities_.push_back({std::move(id), literal_label(value, unit),
                       EntityType::literal,
                       NumericLiteral{value, std::move(unit), std::move(nutrient)}});
  return idx;
}

bool KnowledgeGraph::Builder::add_triple(EntityIndex subject,
                                         std::string_view predicate,
                                         EntityIndex object) {
  if (predicate.empty()) throw DataError("empty predicate");
  if (subject >= entities_.size() || object >= entities_.size()) {
    throw DataError("triple references an unknown entity");
  }
  auto rit = std::find(relations_.begin(), relations_.end(), predicate);
  RelationIndex rel;
  if (rit == relations_.end()) {
    rel = static_cast<RelationIndex>(relations_.size());
    relations_.emplace_back(predicate);
  } else {
    rel = static_cast<RelationIndex>(rit - relations_.begin());
  }
  const Triple t{subject, rel, object};
  if (!seen_.insert(t).second) return false;
  triples_.push_back(t);
  return true;
}

std::optional<EntityIndex> KnowledgeGraph::Builder::find(
    std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

KnowledgeGraph KnowledgeGraph::Builder::build() && {
  KnowledgeGraph kg;
  kg.entities_ = std::move(entities_);
  kg.triples_ = std::move(triples_);
  kg.relations_ = std::move(relations_);
  kg.by_id_ = std::move(by_id_);
  kg.index();
  return kg;
}

// ---------------------------------------------------------- KnowledgeGraph

void KnowledgeGraph::index() {
  std::vector<std::size_t> degree(entities_.size(), 0);
  for (const auto& t : triples_) {
    ++degree[t.subject];
    ++degree[t.object];
  }
  offsets_.assign(entities_.size() + 1, 0);
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    offsets_[i + 1] = offsets_[i] + degree[i];
  }
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (TripleIndex ti = 0; ti < triples_.size(); ++ti) {
    const auto& t = triples_[ti];
    adjacency_[fill[t.subject]++] = {ti, t.object, false};
    adjacency_[fill[t.object]++] = {ti, t.subject, true};
  }
}

std::optional<EntityIndex> KnowledgeGraph::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

EntityIndex KnowledgeGraph::require(std::string_view id) const {
  if (auto e = find(id)) return *e;
  throw DataError("unknown entity id '" + std::string(id) + "'");
}

std::optional<RelationIndex> KnowledgeGraph::find_relation(
    std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i] == name) return static_cast<RelationIndex>(i);
  }
  return std::nullopt;
}

std::vector<EntityIndex> KnowledgeGraph::entities_of_type(
    EntityType type) const {
  std::vector<EntityIndex> out;
  for (EntityIndex i = 0; i < entities_.size(); ++i) {
    if (entities_[i].type == type) out.push_back(i);
  }
  return out;
}

std::optional<EntityIndex> KnowledgeGraph::find_by_label(
    EntityType type, std::string_view label) const {
  for (EntityIndex i = 0; i < entities_.size(); ++i) {
    if (entities_[i].type == type && entities_[i].label == label) return i;
  }
  return std::nullopt;
}

namespace {

std::vector<EntityIndex> follow(const KnowledgeGraph& kg, EntityIndex from,
                                std::string_view predicate, bool inverse) {
  std::vector<EntityIndex> out;
  const auto rel = kg.find_relation(predicate);
  if (!rel) return out;
  for (const auto& e : kg.edges(from)) {
    if (e.inverse == inverse && kg.triple(e.triple).predicate == *rel) {
      out.push_back(e.other);
    }
  }
  return out;
}

}  // namespace

std::vector<EntityIndex> KnowledgeGraph::ingredients_of(EntityIndex r) const {
  return follow(*this, r, predicates::has_ingredient, false);
}
std::vector<EntityIndex> KnowledgeGraph::tags_of(EntityIndex r) const {
  return follow(*this, r, predicates::has_tag, false);
}
std::vector<EntityIndex> KnowledgeGraph::recipes_with_tag(EntityIndex t) const {
  return follow(*this, t, predicates::has_tag, true);
}

std::vector<EntityIndex> KnowledgeGraph::nutrients_of(EntityIndex r) const {
  std::vector<EntityIndex> out;
  for (const auto& e : edges(r)) {
    if (!e.inverse && entities_[e.other].literal) out.push_back(e.other);
  }
  return out;
}

std::optional<EntityIndex> KnowledgeGraph::nutrient_literal(
    EntityIndex r, std::string_view nutrient) const {
  for (const auto& e : edges(r)) {
    const auto& lit = entities_[e.other].literal;
    if (!e.inverse && lit && lit->nutrient == nutrient) return e.other;
  }
  return std::nullopt;
}

std::optional<EntityIndex> KnowledgeGraph::literal_owner(
    EntityIndex literal) const {
  for (const auto& e : edges(literal)) {
    if (e.inverse && entities_[e.other].type == EntityType::recipe) {
      return e.other;
    }
  }
  return std::nullopt;
}

std::string KnowledgeGraph::summary() const {
  std::ostringstream os;
  os << entities_.size() << " entities, " << relations_.size()
     << " relations, " << triples_.size() << " triples";
  return os.str();
}

// --------------------------------------------------------------------- I/O

KnowledgeGraph parse_kg(std::istream& in, LoadReport* report) {
  KnowledgeGraph::Builder b;
  std::size_t duplicates = 0;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> DataError {
    return DataError("kg line " + std::to_string(line_no) + ": " + what);
  };
  auto resolve = [&](std::string_view id, std::optional<EntityType> implied) {
    if (auto e = b.find(id)) return *e;
    if (!implied) {
      throw fail("dangling id reference '" + std::string(id) + "'");
    }
    return b.add_entity(std::string(id), label_from_id(id), *implied);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    try {
      if (fields[0] == "#entity") {
        if (fields.size() != 4) throw fail("#entity needs 4 fields");
        b.add_entity(std::string(fields[1]), std::string(fields[2]),
                     parse_entity_type(fields[3]));
        continue;
      }
      if (line[0] == '#') continue;
      if (fields.size() != 3 && fields.size() != 4) {
        throw fail("expected 3 or 4 tab-separated fields, got " +
                   std::to_string(fields.size()));
      }
      const std::string_view pred = fields[1];
      if (pred.empty()) throw fail("empty predicate");
      const bool core = pred == predicates::has_tag ||
                        pred == predicates::has_ingredient ||
                        pred == predicates::has_nutrient;
      const EntityIndex subject =
          resolve(fields[0], core ? std::optional(EntityType::recipe)
                                  : std::nullopt);
      const std::string_view obj = fields[2];
      EntityIndex object;
      if (!obj.empty() && obj.front() == '"') {
        if (obj.size() < 2 || obj.back() != '"') {
          throw fail("unterminated literal");
        }
        const auto body = obj.substr(1, obj.size() - 2);
        const auto space = body.find(' ');
        if (space == std::string_view::npos) {
          throw fail("literal must be \"<value> <unit>\"");
        }
        double value = 0;
        const auto num = body.substr(0, space);
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc() || p != num.data() + num.size() ||
            !std::isfinite(value)) {
          throw fail("bad literal value '" + std::string(num) + "'");
        }
        std::string unit(body.substr(space + 1));
        if (unit.empty()) throw fail("literal unit is empty");
        std::string nutrient(fields.size() == 4 ? fields[3] : pred);
        object = b.add_literal(subject, value, std::move(unit),
                               std::move(nutrient));
      } else {
        if (fields.size() == 4) throw fail("nutrient column on a non-literal");
        std::optional<EntityType> implied;
        if (pred == predicates::has_tag) implied = EntityType::tag;
        if (pred == predicates::has_ingredient) implied = EntityType::ingredient;
        object = resolve(obj, implied);
      }
      if (!b.add_triple(subject, pred, object)) {
        ++duplicates;
        warn("kg line " + std::to_string(line_no) +
             ": duplicate triple ignored");
      }
    } catch (const DataError& e) {
      const std::string msg = e.what();
      if (msg.rfind("kg line", 0) == 0) throw;
      throw fail(msg);
    }
  }
  KnowledgeGraph kg = std::move(b).build();
  if (report) {
    report->entities = kg.entities().size();
    report->relations = kg.relations().size();
    report->triples = kg.triples().size();
    report->duplicate_triples = duplicates;
  }
  return kg;
}

KnowledgeGraph load_kg(const std::string& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open kg file '" + path + "'");
  return parse_kg(in, report);
}

void save_kg(const KnowledgeGraph& kg, std::ostream& out,
             std::string_view header_comment) {
  if (!header_comment.empty()) {
    std::istringstream hs{std::string(header_comment)};
    std::string l;
    while (std::getline(hs, l)) out << "# " << l << '\n';
  }
  for (const auto& e : kg.entities()) {
    if (e.type == EntityType::literal) continue;
    out << "#entity\t" << e.id << '\t' << e.label << '\t' << to_string(e.type)
        << '\n';
  }
  for (const auto& t : kg.triples()) {
    const auto& s = kg.entity(t.subject);
    const auto& o = kg.entity(t.object);
    out << s.id << '\t' << kg.relation(t.predicate) << '\t';
    if (o.literal) {
      out << '"' << o.label << "\"\t" << o.literal->nutrient;
    } else {
      out << o.id;
    }
    out << '\n';
  }
}

void save_kg(const KnowledgeGraph& kg, const std::string& path,
             std::string_view header_comment) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write kg file '" + path + "'");
  save_kg(kg, out, header_comment);
}

std::vector<std::string> triple_strings(const KnowledgeGraph& kg) {
  std::vector<std::string> out;
  out.reserve(kg.triples().size());
  for (const auto& t : kg.triples()) {
    const auto& o = kg.entity(t.object);
    std::string obj = o.literal ? "\"" + o.label + "\" " + o.literal->nutrient
                                : o.id;
    out.push_back(kg.entity(t.subject).id + "\t" + kg.relation(t.predicate) +
                  "\t" + obj);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- Subgraph

Subgraph::Subgraph(const KnowledgeGraph& kg, EntityIndex topic, int hops,
                   std::vector<EntityIndex> entities)
    : kg_(&kg), topic_(topic), hops_(hops), entities_(std::move(entities)) {
  std::sort(entities_.begin(), entities_.end());
  entities_.erase(std::unique(entities_.begin(), entities_.end()),
                  entities_.end());
  induce_triples();
}

bool Subgraph::contains(EntityIndex e) const {
  return std::binary_search(entities_.begin(), entities_.end(), e);
}

const std::string& Subgraph::label(EntityIndex e) const {
  if (auto it = overrides_.find(e); it != overrides_.end()) return it->second;
  return kg_->entity(e).label;
}

void Subgraph::set_augmented_label(EntityIndex e, std::string label) {
  overrides_[e] = std::move(label);
  augmented_.insert(e);
}

void Subgraph::add_entities(std::span<const EntityIndex> extra) {
  entities_.insert(entities_.end(), extra.begin(), extra.end());
  std::sort(entities_.begin(), entities_.end());
  entities_.erase(std::unique(entities_.begin(), entities_.end()),
                  entities_.end());
  induce_triples();
}

void Subgraph::induce_triples() {
  triples_.clear();
  for (EntityIndex e : entities_) {
    for (const auto& edge : kg_->edges(e)) {
      if (!edge.inverse && contains(edge.other)) triples_.push_back(edge.triple);
    }
  }
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
}

std::vector<EntityIndex> Subgraph::recipes() const {
  std::vector<EntityIndex> out;
  for (EntityIndex e : entities_) {
    if (kg_->entity(e).type == EntityType::recipe) out.push_back(e);
  }
  return out;
}

Subgraph extract_subgraph(const KnowledgeGraph& kg, EntityIndex topic,
                          int hops) {
  if (hops < 1) throw std::invalid_argument("hops must be >= 1");
  if (topic >= kg.entities().size()) throw DataError("unknown topic entity");
  std::vector<int> dist(kg.entities().size(), -1);
  std::vector<EntityIndex> reached{topic};
  std::deque<EntityIndex> queue{topic};
  dist[topic] = 0;
  while (!queue.empty()) {
    const EntityIndex u = queue.front();
    queue.pop_front();
    if (dist[u] == hops) continue;
    for (const auto& e : kg.edges(u)) {
      if (dist[e.other] < 0) {
        dist[e.other] = dist[u] + 1;
        reached.push_back(e.other);
        queue.push_back(e.other);
      }
    }
  }
  return Subgraph(kg, topic, hops, std::move(reached));
}

std::vector<CandidateAnswer> enumerate_candidates(const Subgraph& sub) {
  const auto& kg = sub.kg();
  struct Link {
    PathStep step;
    EntityIndex other;
    TripleIndex triple;
  };
  std::map<EntityIndex, std::vector<Link>> local;
  for (TripleIndex ti : sub.triples()) {
    const auto& t = kg.triple(ti);
    const auto& rel = kg.relation(t.predicate);
    local[t.subject].push_back({{rel, false}, t.object, ti});
    local[t.object].push_back({{rel, true}, t.subject, ti});
  }

  // Layered BFS keeping the lexicographically smallest shortest path.
  std::map<EntityIndex, std::vector<PathStep>> best{{sub.topic(), {}}};
  std::vector<EntityIndex> layer{sub.topic()};
  while (!layer.empty()) {
    std::map<EntityIndex, std::vector<PathStep>> next;
    for (EntityIndex u : layer) {
      const auto& base = best.at(u);
      for (const auto& link : local[u]) {
        if (best.contains(link.other)) continue;
        auto path = base;
        path.push_back(link.step);
        auto it = next.find(link.other);
        if (it == next.end()) {
          next.emplace(link.other, std::move(path));
        } else if (path < it->second) {
          it->second = std::move(path);
        }
      }
    }
    layer.clear();
    for (auto& [node, path] : next) {
      layer.push_back(node);
      best.emplace(node, std::move(path));
    }
  }

  std::vector<EntityIndex> recipes = sub.recipes();
  std::sort(recipes.begin(), recipes.end(), [&](EntityIndex a, EntityIndex b) {
    return kg.entity(a).id < kg.entity(b).id;
  });
  std::vector<CandidateAnswer> out;
  out.reserve(recipes.size());
  for (EntityIndex r : recipes) {
    CandidateAnswer cand;
    cand.node = r;
    cand.answer_type = kg.entity(r).type;
    if (auto it = best.find(r); it != best.end()) cand.answer_path = it->second;
    auto links = local[r];
    std::sort(links.begin(), links.end(),
              [](const Link& a, const Link& b) { return a.triple < b.triple; });
    for (const auto& link : links) {
      for (auto& w : tokenize(sub.label(link.other))) {
        cand.answer_context.push_back({std::move(w), MarkupTag::padding,
                                       link.other});
      }
    }
    out.push_back(std::move(cand));
  }
  return out;
}

}  // namespace foodqa
