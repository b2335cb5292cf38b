#include "foodqa/personalization.hpp"

#include <algorithm>
#include <map>

#include "foodqa/error.hpp"
#include "foodqa/synthetic_kg.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

namespace {

const std::vector<std::vector<std::string>>& negation_triggers() {
  static const std::vector<std::vector<std::string>> triggers = {
      {"without"},        {"don't", "contain"},  {"do", "not", "contain"},
      {"doesn't", "have"}, {"does", "not", "have"}, {"no"}};
  return triggers;
}

bool is_conjunction(const std::string& w) {
  return w == "and" || w == "or" || w == "but";
}

void append_phrase(ExpandedQuery& eq, const std::string& phrase, MarkupTag tag) {
  eq.text += ", " + phrase;
  for (auto& w : tokenize(phrase)) eq.tokens.push_back({std::move(w), tag});
}

}  // namespace

std::string Toggles::label() const {
  if (qe && ka && cm) return "full";
  if (!qe && !ka && !cm) return "none";
  std::string s;
  if (!qe) s += "-QE";
  if (!ka) s += "-KA";
  if (!cm) s += "-CM";
  return s;
}

std::vector<MarkupTag> negation_markups(const std::vector<Token>& tokens) {
  std::vector<MarkupTag> marks(tokens.size(), MarkupTag::padding);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& trig : negation_triggers()) {
      if (i + trig.size() > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < trig.size() && match; ++k) {
        match = tokens[i + k].text == trig[k] && (k == 0 || !tokens[i + k].break_before);
      }
      if (!match) continue;
      for (std::size_t j = i + trig.size(); j < tokens.size(); ++j) {
        if (tokens[j].break_before || is_conjunction(tokens[j].text)) break;
        marks[j] = MarkupTag::negative;
      }
      break;
    }
  }
  return marks;
}

ExpandedQuery raw_query_input(std::string_view raw,
                              std::span<const Constraint> query_constraints) {
  ExpandedQuery eq;
  eq.raw = std::string(raw);
  eq.text = eq.raw;
  for (auto& w : tokenize(raw)) eq.tokens.push_back({std::move(w), MarkupTag::padding});
  eq.constraints.assign(query_constraints.begin(), query_constraints.end());
  return eq;
}

ExpandedQuery expand_query(std::string_view raw, const Persona& persona,
                           std::span<const Constraint> query_constraints) {
  ExpandedQuery eq;
  eq.raw = std::string(raw);
  const auto toks = tokenize_with_breaks(raw);
  const auto marks = negation_markups(toks);
  for (std::size_t i = 0; i < toks.size(); ++i) eq.tokens.push_back({toks[i].text, marks[i]});

  // Phrases go before any sentence-final punctuation.
  std::string_view body = raw;
  while (!body.empty() && (body.back() == '?' || body.back() == '.' ||
                           body.back() == '!' || body.back() == ' ')) {
    body.remove_suffix(1);
  }
  const std::string tail(raw.substr(body.size()));
  eq.text = std::string(body);
  for (const auto& like : persona.likes) {
    append_phrase(eq, "and contains " + like, MarkupTag::positive);
  }
  for (const auto& dislike : persona.dislikes) {
    append_phrase(eq, "and does not have " + dislike, MarkupTag::negative);
  }
  for (const auto& g : persona.guidelines) {
    append_phrase(eq, "and contains " + g.phrase(), MarkupTag::positive);
  }
  if (persona.empty()) eq.text = eq.raw;
  else eq.text += tail;

  eq.constraints.assign(query_constraints.begin(), query_constraints.end());
  for (auto& c : persona.constraints()) eq.constraints.push_back(std::move(c));
  return eq;
}

Subgraph augment_subgraph(const Subgraph& sub, std::span<const Constraint> ranges) {
  Subgraph out = sub;
  std::map<std::string, std::vector<const Constraint*>> by_nutrient;
  for (const auto& c : ranges) {
    if (c.kind == ConstraintKind::nutrient_range && c.range) {
      by_nutrient[c.subject].push_back(&c);
    }
  }
  if (by_nutrient.empty()) return out;
  const auto& kg = sub.kg();
  for (EntityIndex e : sub.entities()) {
    const auto& ent = kg.entity(e);
    if (!ent.literal || sub.is_augmented(e)) continue;
    auto it = by_nutrient.find(ent.literal->nutrient);
    if (it == by_nutrient.end()) continue;

    std::optional<double> kcal;
    if (auto owner = kg.literal_owner(e)) {
      if (auto cal = kg.nutrient_literal(*owner, nutrients::calories)) {
        const auto& cl = *kg.entity(*cal).literal;
        kcal = convert_unit(cl.value, cl.unit, "kcal");
      }
    }
    std::vector<std::string> phrases;
    for (const Constraint* c : it->second) {
      const auto verdict = c->range->admits(ent.literal->value, ent.literal->unit, kcal);
      if (!verdict && !convert_unit(1.0, ent.literal->unit, c->range->unit)) {
        warn("unit mismatch between literal '" + ent.id + "' (" + ent.literal->unit +
             ") and constraint on " + c->subject + " (" + c->range->unit + ")");
      }
      if (verdict.value_or(false)) phrases.push_back(c->phrase());
    }
    out.set_augmented_label(e, join(phrases, " "));
  }
  return out;
}

Subgraph augment_subgraph(const Subgraph& sub, std::span<const Guideline> guidelines) {
  std::vector<Constraint> cs;
  for (const auto& g : guidelines) cs.push_back(Constraint::from_guideline(g));
  return augment_subgraph(sub, cs);
}

std::vector<CandidateAnswer> apply_context_markups(
    std::vector<CandidateAnswer> candidates, std::span<const Constraint> constraints) {
  std::vector<std::pair<std::vector<std::string>, MarkupTag>> subjects;
  for (const auto& c : constraints) subjects.emplace_back(tokenize(c.subject), c.polarity());

  for (auto& cand : candidates) {
    auto& ctx = cand.answer_context;
    std::size_t i = 0;
    while (i < ctx.size()) {
      std::size_t j = i;
      std::vector<std::string> label;
      while (j < ctx.size() && ctx[j].node == ctx[i].node) label.push_back(ctx[j++].word);
      MarkupTag tag = MarkupTag::padding;
      for (const auto& [subj, pol] : subjects) {
        if (!contains_tokens(label, subj)) continue;
        if (pol == MarkupTag::negative) {
          tag = MarkupTag::negative;
          break;
        }
        tag = pol;
      }
      for (std::size_t k = i; k < j; ++k) ctx[k].markup = tag;
      i = j;
    }
  }
  return candidates;
}

}  // namespace foodqa
