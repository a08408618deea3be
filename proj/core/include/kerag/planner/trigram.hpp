#pragma once
#include "kerag/planner/plan.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace kerag {

// Lowercases and maps underscores to spaces.
std::string trigram_normalize(std::string_view s);

// Jaccard similarity of character-trigram sets of the normalized strings,
// padded with boundary markers. Symmetric, in [0,1], 1 for equal inputs.
double trigram_similarity(std::string_view a, std::string_view b);

// At most k (entity, predicate) pairs ranked by mean trigram similarity of
// each name against the question; scores non-increasing, ties broken
// lexicographically by (entity, predicate). Empty question → empty result.
std::vector<CandidatePair> ngram_candidate_pairs(std::string_view question,
                                                 const std::vector<std::string>& entity_names,
                                                 const std::vector<std::string>& predicate_names,
                                                 int k = 3);

}  // namespace kerag
