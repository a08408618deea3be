#pragma once
#include "kerag/kg/types.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kerag {

// Extracted query time frame: a point, a closed range, or an open-ended
// range ("<start> ~ future"). Dates use the MM/DD/YYYY query-time shape.
struct TimeFrame {
    std::string start;
    std::string end;            // empty for a point or an open-ended range
    bool open_ended = false;
    bool defaulted_warning = false;  // set when extraction failed and we fell back

    bool is_point() const { return end.empty() && !open_ended; }
    std::string to_string() const;
};

// The planner's output: domain, topic entities, per-hop excluded relation
// names, and hop count.
struct RetrievalPlan {
    std::string domain;
    std::vector<EntityRef> topic_entities;
    std::vector<std::set<std::string>> excluded;  // one set per hop
    int hops = 1;
    std::optional<TimeFrame> time_frame;

    std::string summary() const;
};

// Throws ValidationError when structural invariants are violated:
// non-empty topic entities, 1 ≤ hops ≤ max_hops, excluded size == hops.
void validate_plan(const RetrievalPlan& plan, int max_hops);

struct FilterDecision {
    std::vector<std::string> kept;
    std::vector<std::string> dropped;
    bool sufficient = false;
    bool entity_link_failure = false;
};

struct CandidatePair {
    std::string entity;
    std::string predicate;
    double score = 0.0;  // in [0,1]
};

enum class FilterMode { llm, similarity, none };

std::string to_string(FilterMode mode);
std::optional<FilterMode> filter_mode_from(std::string_view token);

struct PlannerConfig {
    int max_hops = 3;
    FilterMode filter_mode = FilterMode::llm;
    int top_k = 30;
    int candidate_pairs = 3;
    bool multi_entity = false;
    bool extract_time = true;
    // Similarity mode asks the hop-boundary prompt before settling on one
    // hop; disable for provider-free filtering.
    bool boundary_check = true;
};

// Per-hop record of what the planner saw and decided; drives --trace output
// and tests.
struct PlanTrace {
    struct HopRecord {
        std::vector<std::string> offered;
        std::vector<std::string> kept;
        std::vector<std::string> dropped;
        bool sufficient = false;
    };
    std::string extraction_raw;
    std::vector<HopRecord> hops;
};

}  // namespace kerag
