#include "kerag/retriever/retriever.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

namespace kerag {

RetrievalResult execute_plan(const RetrievalPlan& plan, const KgBackend& backend) {
    validate_plan(plan, plan.hops);

    const Ontology& ontology = backend.ontology();
    RetrievalResult result;
    Subgraph& sub = result.subgraph;

    std::vector<EntityRef> frontier = plan.topic_entities;
    std::set<std::string> seen;
    size_t calls_attempted = 0;

    for (int hop = 1; hop <= plan.hops; ++hop) {
        const auto& excluded = plan.excluded[static_cast<size_t>(hop - 1)];

        std::vector<std::string> frontier_types;
        for (const auto& entity : frontier)
            if (std::find(frontier_types.begin(), frontier_types.end(), entity.entity_type) ==
                frontier_types.end())
                frontier_types.push_back(entity.entity_type);

        std::vector<std::string> keep;
        for (const auto& rel : offered_relations(ontology, plan.domain, frontier_types))
            if (!excluded.count(rel.name)) keep.push_back(rel.name);

        std::vector<EntityRef> next_frontier;
        std::set<std::string> next_ids;
        if (!frontier.empty() && !keep.empty()) {
            ++calls_attempted;
            FetchOutcome outcome = backend.fetch_neighbors(frontier, keep, hop);
            for (auto& error : outcome.errors) result.errors.push_back(std::move(error));
            for (auto& triple : outcome.triples) {
                if (!seen.insert(triple_key(triple)).second) continue;
                if (const auto* obj = as_entity(triple.object))
                    if (next_ids.insert(obj->id).second) next_frontier.push_back(*obj);
                sub.triples.push_back(std::move(triple));
            }
        }
        frontier = std::move(next_frontier);
        sub.hops_done = hop;
    }

    sub.frontier = frontier;
    // Empty-by-exclusion is fine; empty because the backend failed is not.
    if (calls_attempted > 0 && sub.triples.empty() && !result.errors.empty())
        throw RetrievalError("retrieval failed for every entity of the plan");
    return result;
}

std::string LinearizedEvidence::joined() const {
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

LinearizedEvidence linearize(const Subgraph& subgraph, int budget, const Ontology* ontology) {
    if (budget < 1) throw ArgumentError("linearize: budget must be >= 1");

    struct Row {
        int hop;
        int pred_index;
        std::string object_text;
        std::string subject_label;
        std::string predicate;
    };
    std::vector<Row> rows;
    rows.reserve(subgraph.triples.size());
    int unknown_index = ontology ? static_cast<int>(ontology->relation_count()) : 0;
    for (const auto& t : subgraph.triples) {
        Row row;
        row.hop = t.hop;
        row.pred_index = ontology ? ontology->declaration_index(t.predicate) : unknown_index;
        row.object_text = node_text(t.object);
        row.subject_label = t.subject.label.empty() ? t.subject.id : t.subject.label;
        row.predicate = t.predicate;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.hop != b.hop) return a.hop < b.hop;
        if (a.pred_index != b.pred_index) return a.pred_index < b.pred_index;
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        if (a.object_text != b.object_text) return a.object_text < b.object_text;
        return a.subject_label < b.subject_label;
    });

    LinearizedEvidence evidence;
    evidence.triple_count = static_cast<int>(rows.size());
    for (const auto& row : rows) {
        if (evidence.lines.size() >= static_cast<size_t>(budget)) {
            evidence.truncated = true;
            break;
        }
        evidence.lines.push_back("TRIPLE: (" + row.subject_label + ", " + row.predicate + ", " +
                                 row.object_text + ")");
    }
    return evidence;
}

void dump_subgraph(std::ostream& out, const Subgraph& subgraph) {
    for (const auto& t : subgraph.triples) {
        nlohmann::ordered_json rec = {{"hop", t.hop},
                                      {"subject", t.subject.id},
                                      {"predicate", t.predicate},
                                      {"object", node_text(t.object)},
                                      {"source", t.source}};
        out << rec.dump() << '\n';
    }
}

}  // namespace kerag
