#include "kerag/kg/backend.hpp"

#include "kerag/errors.hpp"

#include <nlohmann/json.hpp>

namespace kerag {

void check_fetch_preconditions(std::span<const std::string> keep, int hop) {
    if (hop < 1) throw ArgumentError("fetch_neighbors: hop must be >= 1");
    if (keep.empty()) throw ArgumentError("fetch_neighbors: keep list must be non-empty");
}

std::string KgBackend::tool_catalog_entry(const SchemaRelation& rel) const {
    nlohmann::ordered_json spec = {
        {"type", "function"},
        {"function",
         {{"name", rel.name},
          {"description", rel.description},
          {"parameters",
           {{"type", "object"},
            {"properties",
             {{"entity",
               {{"type", "string"}, {"description", "The entity interested."}}}}},
            {"required", nlohmann::ordered_json::array({"entity"})}}}}}};
    return "Use the function '" + rel.name + "' to '" + rel.description + "':\n" + spec.dump();
}

}  // namespace kerag
