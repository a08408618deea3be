#pragma once
#include "kerag/kg/backend.hpp"
#include "kerag/planner/plan.hpp"

#include <iosfwd>

namespace kerag {

struct RetrievalResult {
    Subgraph subgraph;
    std::vector<FetchError> errors;  // per-entity annotations; partial results survive
};

// Executes a plan hop by hop: offered relations of the frontier types minus
// the hop's excluded set, frontier advancing over entity-valued objects of
// new triples. Duplicate (s, p, o) triples keep their lowest hop stamp.
// Throws RetrievalError when every call of the run failed and nothing was
// retrieved.
RetrievalResult execute_plan(const RetrievalPlan& plan, const KgBackend& backend);

// Evidence lines for the summarizer, ordered by (hop, predicate declaration
// order, object text).
struct LinearizedEvidence {
    std::vector<std::string> lines;
    int triple_count = 0;
    bool truncated = false;

    std::string joined() const;
};

LinearizedEvidence linearize(const Subgraph& subgraph, int budget,
                             const Ontology* ontology = nullptr);

// Line-delimited dump (hop, subject, predicate, object, source) for audits.
void dump_subgraph(std::ostream& out, const Subgraph& subgraph);

}  // namespace kerag
