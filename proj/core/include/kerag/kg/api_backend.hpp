#pragma once
#include "kerag/kg/backend.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kerag {

using ArgMap = std::map<std::string, std::string>;
// Handlers return the structured API result as JSON text.
using ApiHandler = std::function<std::string(const ArgMap&)>;

struct FunctionSpec {
    std::string name;
    std::string description;
    std::string domain;
    std::string subject_type;  // entity type of the queried subject
    std::string entity_arg;    // argument bound to the queried entity id
    std::vector<std::string> required_args;
    bool object_is_entity = false;        // hint for flattening string results
    std::string object_entity_type;
    LiteralKind object_datatype = LiteralKind::text;
};

// Knowledge accessed through declared functions. Each function doubles as
// one schema relation, so schema-level planning works unchanged.
class ApiBackend : public KgBackend {
public:
    void register_function(FunctionSpec spec, ApiHandler handler);

    BackendKind kind() const override { return BackendKind::api; }
    const Ontology& ontology() const override { return ontology_; }

    // Dispatches a declared function and flattens the structured result to
    // triples with subject = the queried entity and predicates = result
    // field names. Unknown function → RegistryError naming the nearest
    // declared one; missing required arg → ArgumentError; extra args are
    // ignored.
    std::vector<Triple> api_dispatch(const std::string& function_name, const ArgMap& args,
                                     int hop = 1) const;

    FetchOutcome fetch_neighbors(std::span<const EntityRef> entities,
                                 std::span<const std::string> keep, int hop) const override;

    std::optional<EntityRef> resolve_entity(std::string_view name,
                                            std::string_view domain) const override;

    std::string tool_catalog_entry(const SchemaRelation& rel) const override;

    const FunctionSpec* find_function(std::string_view name) const;

    // Registry file: {"functions": [{...spec, "responses": {entity → json},
    // "default_response": json}]}. Responses become canned handlers.
    static std::shared_ptr<ApiBackend> load_registry(const std::string& path);

private:
    struct Entry {
        FunctionSpec spec;
        ApiHandler handler;
    };
    Ontology ontology_;
    std::map<std::string, Entry, std::less<>> functions_;
    std::map<std::string, std::string> domain_entity_types_;  // domain → subject type
};

// Levenshtein distance, used for nearest-function suggestions.
size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace kerag
