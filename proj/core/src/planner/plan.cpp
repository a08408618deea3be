#include "kerag/planner/plan.hpp"

#include "kerag/errors.hpp"

#include <sstream>

namespace kerag {

std::string TimeFrame::to_string() const {
    if (open_ended) return "<" + start + " ~ future>";
    if (end.empty()) return "<" + start + ">";
    return "<" + start + " ~ " + end + ">";
}

std::string RetrievalPlan::summary() const {
    std::ostringstream out;
    out << "domain=" << domain << " entities=[";
    for (size_t i = 0; i < topic_entities.size(); ++i) {
        if (i) out << ", ";
        out << topic_entities[i].label;
    }
    out << "] hops=" << hops << " excluded=[";
    for (size_t i = 0; i < excluded.size(); ++i) {
        if (i) out << "; ";
        out << "{";
        bool first = true;
        for (const auto& name : excluded[i]) {
            if (!first) out << ", ";
            out << name;
            first = false;
        }
        out << "}";
    }
    out << "]";
    if (time_frame) out << " time=" << time_frame->to_string();
    return out.str();
}

void validate_plan(const RetrievalPlan& plan, int max_hops) {
    if (plan.topic_entities.empty())
        throw ValidationError("retrieval plan has no topic entities");
    if (plan.hops < 1) throw ValidationError("retrieval plan hop count must be >= 1");
    if (plan.hops > max_hops)
        throw ValidationError("retrieval plan hop count " + std::to_string(plan.hops) +
                              " exceeds max_hops " + std::to_string(max_hops));
    if (plan.excluded.size() != static_cast<size_t>(plan.hops))
        throw ValidationError("retrieval plan needs one excluded set per hop");
    for (const auto& entity : plan.topic_entities)
        if (entity.id.empty()) throw ValidationError("topic entity with empty id");
}

std::string to_string(FilterMode mode) {
    switch (mode) {
        case FilterMode::llm: return "llm";
        case FilterMode::similarity: return "similarity";
        case FilterMode::none: return "none";
    }
    return "llm";
}

std::optional<FilterMode> filter_mode_from(std::string_view token) {
    if (token == "llm") return FilterMode::llm;
    if (token == "similarity") return FilterMode::similarity;
    if (token == "none") return FilterMode::none;
    return std::nullopt;
}

}  // namespace kerag
