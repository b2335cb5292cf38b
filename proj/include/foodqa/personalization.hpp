#pragma once

// Query Expansion, KG Augmentation and Constraint Modeling. Each is a pure
// function over immutable inputs and can be switched off independently.

#include <span>
#include <string>
#include <vector>

#include "foodqa/constraints.hpp"
#include "foodqa/kg.hpp"
#include "foodqa/text.hpp"

namespace foodqa {

struct Toggles {
  bool qe = true;
  bool ka = true;
  bool cm = true;

  std::string label() const;  // "full", "-KA", "none", ...
  bool operator==(const Toggles&) const = default;
};

struct QueryToken {
  std::string word;
  MarkupTag markup = MarkupTag::padding;

  bool operator==(const QueryToken&) const = default;
};

struct ExpandedQuery {
  std::string raw;
  std::string text;  // surface form with the appended constraint phrases
  std::vector<QueryToken> tokens;
  std::vector<Constraint> constraints;  // query constraints then persona
};

// Appends persona constraints in the fixed order likes, dislikes, guidelines:
//   like     -> ", and contains {ingredient}"            (positive)
//   dislike  -> ", and does not have {ingredient}"       (negative)
//   guideline-> ", and contains {guideline phrase}"      (positive)
// Raw-query tokens are padding except the objects of negation triggers.
ExpandedQuery expand_query(std::string_view raw_query, const Persona& persona,
                           std::span<const Constraint> query_constraints = {});

// The raw query alone, every token padding (QE disabled).
ExpandedQuery raw_query_input(std::string_view raw_query,
                              std::span<const Constraint> query_constraints = {});

// Negative markup for tokens governed by a negation trigger, padding otherwise.
std::vector<MarkupTag> negation_markups(const std::vector<Token>& tokens);

// Rewrites nutrient literals targeted by a nutrient-range constraint: the
// label becomes the phrases of every satisfied constraint on that nutrient,
// or empty when none is satisfied. Recipe nodes are always kept; literals
// already rewritten are left alone.
Subgraph augment_subgraph(const Subgraph& sub, std::span<const Constraint> ranges);
Subgraph augment_subgraph(const Subgraph& sub, std::span<const Guideline> guidelines);

// Context words of nodes whose label contains a constraint subject (at token
// boundaries) take that constraint's polarity, negative taking precedence;
// every other context word is reset to padding.
std::vector<CandidateAnswer> apply_context_markups(
    std::vector<CandidateAnswer> candidates, std::span<const Constraint> constraints);

}  // namespace foodqa
