#pragma once
#include "kerag/kg/backend.hpp"

#include <string>

namespace kerag {

struct SparqlConfig {
    std::string endpoint;               // e.g. http://host:3030/sparql
    std::string entity_iri_prefix;      // prepended to entity names
    std::string predicate_iri_prefix;   // prepended to relation names
    bool space_to_underscore = true;    // entity names → IRI local parts
    int timeout_seconds = 30;
    std::string ontology_path;          // fixture-format file, [ontology] section used
    std::vector<std::string> entity_list;  // optional known entities for linking
};

// One-hop neighborhood access over a SPARQL HTTP endpoint. Each (entity,
// predicate) pair issues one fixed parameterized query, subject → object
// direction only. Results are consumed in the SPARQL JSON results format.
class SparqlBackend : public KgBackend {
public:
    SparqlBackend(SparqlConfig config, Ontology ontology);

    BackendKind kind() const override { return BackendKind::sparql; }
    const Ontology& ontology() const override { return ontology_; }

    FetchOutcome fetch_neighbors(std::span<const EntityRef> entities,
                                 std::span<const std::string> keep, int hop) const override;

    std::optional<EntityRef> resolve_entity(std::string_view name,
                                            std::string_view domain) const override;
    std::vector<std::string> entity_names() const override { return config_.entity_list; }

    // The exact query text issued for one (entity, predicate) pair.
    std::string one_hop_query(const EntityRef& entity, const std::string& predicate) const;

    static std::shared_ptr<SparqlBackend> from_config(const SparqlConfig& config);

private:
    std::string entity_iri(std::string_view id) const;
    std::string local_name(std::string_view iri) const;

    SparqlConfig config_;
    Ontology ontology_;
};

}  // namespace kerag
