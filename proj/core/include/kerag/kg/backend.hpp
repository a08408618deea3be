#pragma once
#include "kerag/kg/types.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kerag {

struct FetchError {
    std::string entity_id;
    std::string message;
    bool retryable = false;
};

// Per-entity failures do not abort a batch: partial triples plus errors.
struct FetchOutcome {
    std::vector<Triple> triples;
    std::vector<FetchError> errors;
};

enum class BackendKind { memory, sparql, api };

// Uniform knowledge-graph access. Backends are immutable after load and
// safe for concurrent reads.
class KgBackend {
public:
    virtual ~KgBackend() = default;

    virtual BackendKind kind() const = 0;
    virtual const Ontology& ontology() const = 0;

    // All triples whose subject is in `entities` and predicate in `keep`,
    // stamped with `hop` and a source descriptor. hop ≥ 1, keep non-empty.
    virtual FetchOutcome fetch_neighbors(std::span<const EntityRef> entities,
                                         std::span<const std::string> keep, int hop) const = 0;

    // Best-effort lookup of a mentioned name as a typed entity.
    virtual std::optional<EntityRef> resolve_entity(std::string_view name,
                                                    std::string_view domain) const {
        (void)name;
        (void)domain;
        return std::nullopt;
    }

    // Candidate lists for trigram pairing; empty when the backend cannot
    // enumerate.
    virtual std::vector<std::string> entity_names() const { return {}; }
    virtual std::vector<std::string> predicate_names() const {
        return ontology().predicate_names();
    }

    // One catalog entry of the filtering prompt for this relation, in the
    // tool-spec style the filter templates expect.
    virtual std::string tool_catalog_entry(const SchemaRelation& rel) const;
};

using BackendPtr = std::shared_ptr<const KgBackend>;

// Throws ArgumentError unless hop ≥ 1 and keep is non-empty.
void check_fetch_preconditions(std::span<const std::string> keep, int hop);

}  // namespace kerag
