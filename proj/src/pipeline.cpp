#include "foodqa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "foodqa/error.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

EntityIndex resolve_topic(const KnowledgeGraph& kg, std::string_view tag_label) {
  const auto t = kg.find_by_label(EntityType::tag, tag_label);
  if (!t) throw DataError("topic tag '" + std::string(tag_label) + "' is not in the KG");
  return *t;
}

ExpandedQuery model_query(const BenchmarkExample& ex, const Toggles& toggles) {
  ExpandedQuery q = toggles.qe ? expand_query(ex.raw_query, ex.persona, ex.query_constraints)
                               : raw_query_input(ex.raw_query, ex.query_constraints);
  if (!toggles.cm) {
    for (auto& t : q.tokens) t.markup = MarkupTag::padding;
  }
  return q;
}

PreparedExample prepare_on_subgraph(const BenchmarkExample& ex, const Subgraph& sub,
                                    const Toggles& toggles, std::set<std::string> gold) {
  PreparedExample p;
  p.id = ex.id;
  p.query = model_query(ex, toggles);
  p.constraints = p.query.constraints;
  p.gold = std::move(gold);
  const Subgraph used = toggles.ka ? augment_subgraph(sub, p.constraints) : sub;
  p.candidates = enumerate_candidates(used);
  if (toggles.cm) p.candidates = apply_context_markups(std::move(p.candidates), p.constraints);
  for (const auto& c : p.candidates) p.candidate_ids.push_back(sub.kg().entity(c.node).id);
  return p;
}

PreparedExample prepare_example(const KnowledgeGraph& kg, const BenchmarkExample& ex,
                                const Toggles& toggles, int hops) {
  const Subgraph sub = extract_subgraph(kg, resolve_topic(kg, ex.topic_tag), hops);
  for (const auto& g : ex.gold_answers) {
    if (!kg.find(g)) throw DataError(ex.id + ": gold recipe '" + g + "' is not in the KG");
  }
  return prepare_on_subgraph(ex, sub, toggles, {ex.gold_answers.begin(), ex.gold_answers.end()});
}

void extend_vocabulary(Vocabulary& vocab, const PreparedExample& ex) {
  for (const auto& t : ex.query.tokens) vocab.add_word(t.word);
  for (const auto& c : ex.candidates) {
    vocab.add_type(to_string(c.answer_type));
    for (const auto& s : c.answer_path) vocab.add_relation(s.token());
    for (const auto& w : c.answer_context) vocab.add_word(w.word);
  }
}

TrainingExample to_training_example(const Vocabulary& vocab, const PreparedExample& ex) {
  TrainingExample t;
  t.query = index_query(vocab, ex.query);
  for (std::size_t i = 0; i < ex.candidates.size(); ++i) {
    t.candidates.push_back(index_answer(vocab, ex.candidates[i]));
    (ex.gold.contains(ex.candidate_ids[i]) ? t.positives : t.negatives).push_back(i);
  }
  return t;
}

std::vector<ScoredAnswer> score_candidates(const EmbeddingModel& model, const PreparedExample& ex,
                                           bool parallel, const Encoder& encoder) {
  std::vector<ScoredAnswer> out;
  if (ex.candidates.empty() || ex.query.tokens.empty()) return out;
  const auto q = encoder.encode_query(model, index_query(model.vocab, ex.query));
  Matrix answers(ex.candidates.size(), q.size());
  for (std::size_t i = 0; i < ex.candidates.size(); ++i) {
    const auto a = encoder.encode_answer(model, index_answer(model.vocab, ex.candidates[i]));
    std::copy(a.begin(), a.end(), answers.row(i).begin());
  }
  std::vector<double> scores(ex.candidates.size());
  if (parallel) kernels::omp::score_candidates(q, answers, scores);
  else kernels::serial::score_candidates(q, answers, scores);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw NumericalError(ex.id + ": non-finite score");
    out.push_back({ex.candidate_ids[i], scores[i]});
  }
  sort_ranked(out);
  return out;
}

TrainedModel train_model(const KnowledgeGraph& kg, std::span<const BenchmarkExample> train,
                         const Toggles& toggles, const ModelConfig& model_config,
                         const TrainConfig& train_config, int hops,
                         const std::string& pretrained_path) {
  std::vector<PreparedExample> prepared(train.size());
  std::vector<std::string> errors(train.size());
  const long n = static_cast<long>(train.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) {
    try {
      prepared[i] = prepare_example(kg, train[i], toggles, hops);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw DataError(e);
  }

  TrainedModel out;
  out.model.config = model_config;
  for (const auto& p : prepared) extend_vocabulary(out.model.vocab, p);
  out.model.initialize(train_config.seed);
  if (!pretrained_path.empty()) load_pretrained_embeddings(out.model, pretrained_path);

  std::vector<TrainingExample> examples(prepared.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) examples[i] = to_training_example(out.model.vocab, prepared[i]);
  out.report = foodqa::train(out.model, out.optimizer, examples, train_config);
  return out;
}

// ------------------------------------------------------------------- parse

namespace {

struct Span {
  std::size_t begin, end;
};

std::optional<Span> find_tokens(const std::vector<std::string>& hay,
                                const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return std::nullopt;
  const auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
  if (it == hay.end()) return std::nullopt;
  const auto b = static_cast<std::size_t>(it - hay.begin());
  return Span{b, b + needle.size()};
}

}  // namespace

ParsedQuery parse_query(const KnowledgeGraph& kg, const ThresholdTable& thresholds,
                        std::string_view raw) {
  ParsedQuery out;
  const auto toks = tokenize_with_breaks(raw);
  std::vector<std::string> words;
  for (const auto& t : toks) words.push_back(t.text);
  const auto neg = negation_markups(toks);
  std::vector<bool> used(words.size(), false);

  // Topic tag: longest matching label.
  std::size_t best_len = 0;
  std::optional<Span> tag_span;
  for (EntityIndex t : kg.entities_of_type(EntityType::tag)) {
    const auto label = tokenize(kg.entity(t).label);
    if (label.size() <= best_len) continue;
    if (auto s = find_tokens(words, label)) {
      best_len = label.size();
      out.topic = t;
      tag_span = s;
    }
  }
  if (out.topic) {
    out.constraints.push_back(Constraint::tag(kg.entity(*out.topic).label));
    for (std::size_t i = tag_span->begin; i < tag_span->end; ++i) used[i] = true;
  } else {
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (EntityIndex t : kg.entities_of_type(EntityType::tag)) {
      const auto& label = kg.entity(t).label;
      const auto n = tokenize(label).size();
      for (std::size_t i = 0; i + n <= words.size(); ++i) {
        const std::vector<std::string> gram(words.begin() + static_cast<long>(i),
                                            words.begin() + static_cast<long>(i + n));
        const auto dist = edit_distance(join(gram, " "), label);
        if (dist < best) {
          best = dist;
          out.suggestion = label;
        }
      }
    }
  }

  // Nutrient limits.
  for (const auto& nutrient : thresholds.nutrients()) {
    for (const auto& level : thresholds.levels(nutrient)) {
      if (auto s = find_tokens(words, {level, nutrient})) {
        out.constraints.push_back(thresholds.make_constraint(level, nutrient));
        used[s->begin] = used[s->begin + 1] = true;
      }
    }
  }

  // Ingredients, longest labels first so "olive oil" shadows "oil".
  std::vector<std::pair<std::vector<std::string>, std::string>> labels;
  for (EntityIndex i : kg.entities_of_type(EntityType::ingredient)) {
    labels.emplace_back(tokenize(kg.entity(i).label), kg.entity(i).label);
  }
  std::stable_sort(labels.begin(), labels.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [tokens, label] : labels) {
    const auto s = find_tokens(words, tokens);
    if (!s) continue;
    bool free = true;
    for (std::size_t i = s->begin; i < s->end; ++i) free = free && !used[i];
    if (!free) continue;
    for (std::size_t i = s->begin; i < s->end; ++i) used[i] = true;
    const bool negated = neg[s->begin] == MarkupTag::negative;
    out.constraints.push_back(Constraint::ingredient(label, !negated, ConstraintSource::query));
  }
  return out;
}

}  // namespace foodqa
