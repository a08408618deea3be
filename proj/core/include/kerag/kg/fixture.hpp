#pragma once
#include "kerag/kg/backend.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace kerag {

// One raw edge of a loaded graph, before hop stamping.
struct Edge {
    EntityRef subject;
    std::string predicate;
    NodeValue object;
};

// Read-only graph loaded from a fixture file. Thread-safe for reads.
class MemoryBackend : public KgBackend {
public:
    MemoryBackend(Ontology ontology, std::vector<Edge> edges);

    BackendKind kind() const override { return BackendKind::memory; }
    const Ontology& ontology() const override { return ontology_; }

    FetchOutcome fetch_neighbors(std::span<const EntityRef> entities,
                                 std::span<const std::string> keep, int hop) const override;

    std::optional<EntityRef> resolve_entity(std::string_view name,
                                            std::string_view domain) const override;
    std::vector<std::string> entity_names() const override;

    const std::vector<Edge>& edges() const { return edges_; }

private:
    Ontology ontology_;
    std::vector<Edge> edges_;
    std::map<std::string, std::vector<size_t>> by_subject_;   // id → edge indices, file order
    std::map<std::string, EntityRef> entities_;               // id → ref
    std::map<std::string, std::string> entities_folded_;      // folded name → id
};

// Fixture file format: tab-separated, UTF-8, '#' comment lines, optional
// [ontology] / [triples] section headers.
//   REL <domain> <subject_type> <name> <entity:TYPE|attr:DATATYPE> <description>
//   T <subject_id> <subject_type> <predicate> <E:object_id:object_type | L:datatype:value>
std::shared_ptr<MemoryBackend> load_fixture(const std::string& path);
std::shared_ptr<MemoryBackend> parse_fixture(std::istream& in, const std::string& source_name);

// Serializes an ontology + edge list back to the fixture format. Used by
// tooling and randomized tests to round-trip generated graphs.
std::string write_fixture(const Ontology& ontology, const std::vector<Edge>& edges);

}  // namespace kerag
