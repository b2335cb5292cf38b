#include "foodqa/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "foodqa/error.hpp"

namespace foodqa {

QuestionResult score_question(std::string id, const std::set<std::string>& gold,
                              std::vector<ScoredAnswer> predicted) {
  QuestionResult q;
  q.id = std::move(id);
  q.gold.assign(gold.begin(), gold.end());
  sort_ranked(predicted);
  for (const auto& p : predicted) {
    q.predicted.push_back(p.id);
    q.scores.push_back(p.score);
  }
  q.prf = question_prf(gold, q.predicted);
  q.apar = question_ap_ar(gold, q.predicted);
  return q;
}

EvalResult aggregate(std::string label, std::string split, std::vector<QuestionResult> questions) {
  EvalResult r;
  r.label = std::move(label);
  r.split = std::move(split);
  r.questions = questions.size();
  for (const auto& q : questions) {
    r.map += q.apar.ap;
    r.mar += q.apar.ar;
    r.f1 += q.prf.f1;
    r.precision += q.prf.precision;
    r.recall += q.prf.recall;
    if (q.skipped) ++r.skipped;
  }
  if (r.questions > 0) {
    const double n = static_cast<double>(r.questions);
    r.map /= n;
    r.mar /= n;
    r.f1 /= n;
    r.precision /= n;
    r.recall /= n;
  }
  r.per_question = std::move(questions);
  return r;
}

namespace {

template <typename Fn>
std::vector<QuestionResult> per_question(std::size_t n, Fn&& fn) {
  std::vector<QuestionResult> out(n);
  std::vector<std::string> errors(n);
  std::vector<char> numerical(n, 0);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = fn(static_cast<std::size_t>(i));
    } catch (const NumericalError& e) {
      errors[i] = e.what();
      numerical[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i].empty()) continue;
    if (numerical[i]) throw NumericalError(errors[i]);
    throw DataError(errors[i]);
  }
  return out;
}

QuestionResult skipped_question(const std::string& id, const std::set<std::string>& gold) {
  QuestionResult q = score_question(id, gold, {});
  q.skipped = true;
  return q;
}

}  // namespace

EvalResult evaluate(const EmbeddingModel& model, const KnowledgeGraph& kg,
                    std::span<const BenchmarkExample> examples, const EvalOptions& options,
                    std::string label, std::string split) {
  auto questions = per_question(examples.size(), [&](std::size_t i) {
    const auto prepared = prepare_example(kg, examples[i], options.toggles, options.hops);
    if (prepared.candidates.empty()) return skipped_question(prepared.id, prepared.gold);
    auto selected = select_answers(score_candidates(model, prepared), options.theta);
    return score_question(prepared.id, prepared.gold, std::move(selected));
  });
  return aggregate(std::move(label), std::move(split), std::move(questions));
}

RecipeSimComparison evaluate_recipesim(const EmbeddingModel& model, const KnowledgeGraph& kg,
                                       std::span<const BenchmarkExample> examples,
                                       const RecipeEmbeddings& emb, const SimilarityGraph& graph,
                                       std::span<const FoodLog> logs,
                                       const RecipeSimOptions& opt) {
  if (logs.empty()) throw DataError("no food logs given");
  std::vector<std::vector<std::size_t>> log_rows;
  for (const auto& l : logs) log_rows.push_back(resolve_log(kg, emb, l));

  std::vector<QuestionResult> sim_results(examples.size());
  std::vector<double> gold_sizes(examples.size()), added(examples.size());
  const Toggles full;
  auto base_results = per_question(examples.size(), [&](std::size_t i) {
    const auto& ex = examples[i];
    Rng rng = make_rng(opt.seed, "log-pick", i);
    const auto& rows = log_rows[uniform_index(rng, log_rows.size())];
    const Subgraph sub = extract_subgraph(kg, resolve_topic(kg, ex.topic_tag), opt.hops);
    const auto similar = top_similar_recipes(emb, graph, rows, opt.top_k);
    const auto constraints = ex.all_constraints();
    std::set<std::string> gold;
    for (EntityIndex r :
         logaware_gold(sub, constraints, similar, emb, rows, opt.lambda, opt.theta_g).recipes) {
      gold.insert(kg.entity(r).id);
    }
    gold_sizes[i] = static_cast<double>(gold.size());

    const Subgraph expanded = expand_kg_subgraph(sub, similar);
    auto sim_prepared = prepare_on_subgraph(ex, expanded, full, gold);
    added[i] = static_cast<double>(sim_prepared.candidates.size()) -
               static_cast<double>(sub.recipes().size());
    if (sim_prepared.candidates.empty()) {
      sim_results[i] = skipped_question(ex.id, gold);
    } else {
      auto scored = score_candidates(model, sim_prepared);
      std::vector<double> raw;
      for (const auto& s : scored) raw.push_back(s.score);
      const auto norm = normalize_scores(raw);
      for (std::size_t k = 0; k < scored.size(); ++k) {
        const std::size_t row = emb.require_row(kg, scored[k].id);
        scored[k].score = combined_score(norm[k], log_similarity(emb, rows, row), opt.lambda);
      }
      sim_results[i] = score_question(ex.id, gold, select_answers(std::move(scored), opt.theta_sim));
    }

    const auto base_prepared = prepare_on_subgraph(ex, sub, full, gold);
    if (base_prepared.candidates.empty()) return skipped_question(ex.id, gold);
    return score_question(ex.id, gold,
                          select_answers(score_candidates(model, base_prepared), opt.theta_base));
  });

  RecipeSimComparison c;
  c.base = aggregate("personalized", "test", std::move(base_results));
  c.recipesim = aggregate("personalized+recipesim", "test", std::move(sim_results));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    c.avg_gold += gold_sizes[i];
    c.avg_added += added[i];
  }
  if (!examples.empty()) {
    c.avg_gold /= static_cast<double>(examples.size());
    c.avg_added /= static_cast<double>(examples.size());
  }
  return c;
}

std::string results_table(std::span<const EvalResult> results) {
  std::ostringstream os;
  std::size_t width = 8;
  for (const auto& r : results) width = std::max(width, r.label.size() + 2);
  os << std::left << std::setw(static_cast<int>(width)) << "model" << std::setw(10) << "split"
     << std::right << std::setw(8) << "MAP" << std::setw(8) << "MAR" << std::setw(8) << "F1"
     << std::setw(11) << "questions" << std::setw(9) << "skipped" << '\n';
  os << std::fixed << std::setprecision(1);
  for (const auto& r : results) {
    os << std::left << std::setw(static_cast<int>(width)) << r.label << std::setw(10) << r.split
       << std::right << std::setw(8) << 100 * r.map << std::setw(8) << 100 * r.mar
       << std::setw(8) << 100 * r.f1 << std::setw(11) << r.questions << std::setw(9)
       << r.skipped << '\n';
  }
  return os.str();
}

void write_results_csv(const std::string& path, std::span<const EvalResult> results) {
  std::ostringstream os;
  os << "model,split,questions,skipped,map,mar,f1,precision,recall\n";
  os << std::setprecision(10);
  for (const auto& r : results) {
    os << r.label << ',' << r.split << ',' << r.questions << ',' << r.skipped << ',' << r.map
       << ',' << r.mar << ',' << r.f1 << ',' << r.precision << ',' << r.recall << '\n';
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << os.str();
  }
  std::rename(tmp.c_str(), path.c_str());
}

void write_per_question_jsonl(const std::string& path, const EvalResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& q : result.per_question) {
    nlohmann::json j = {{"id", q.id},         {"gold", q.gold},         {"predicted", q.predicted},
                        {"p", q.prf.precision}, {"r", q.prf.recall},     {"f1", q.prf.f1},
                        {"ap", q.apar.ap},    {"ar", q.apar.ar},        {"skipped", q.skipped}};
    out << j.dump() << '\n';
  }
}

}  // namespace foodqa
