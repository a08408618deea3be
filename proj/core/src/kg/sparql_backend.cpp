#include "kerag/kg/sparql_backend.hpp"

#include "kerag/errors.hpp"
#include "kerag/kg/fixture.hpp"

#include <algorithm>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace kerag {

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("sparql endpoint needs a scheme: " + url);
    size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

const SchemaRelation* relation_named(const Ontology& ontology, std::string_view name) {
    for (const auto& rel : ontology.relations())
        if (rel.name == name) return &rel;
    return nullptr;
}

}  // namespace

SparqlBackend::SparqlBackend(SparqlConfig config, Ontology ontology)
    : config_(std::move(config)), ontology_(std::move(ontology)) {
    split_url(config_.endpoint);  // validate early
}

std::string SparqlBackend::entity_iri(std::string_view id) const {
    std::string local(id);
    if (config_.space_to_underscore)
        std::replace(local.begin(), local.end(), ' ', '_');
    return config_.entity_iri_prefix + local;
}

std::string SparqlBackend::local_name(std::string_view iri) const {
    std::string out(iri);
    if (out.rfind(config_.entity_iri_prefix, 0) == 0)
        out = out.substr(config_.entity_iri_prefix.size());
    if (config_.space_to_underscore) std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::string SparqlBackend::one_hop_query(const EntityRef& entity,
                                         const std::string& predicate) const {
    return "SELECT ?o WHERE { <" + entity_iri(entity.id) + "> <" +
           config_.predicate_iri_prefix + predicate + "> ?o . }";
}

FetchOutcome SparqlBackend::fetch_neighbors(std::span<const EntityRef> entities,
                                            std::span<const std::string> keep, int hop) const {
    check_fetch_preconditions(keep, hop);
    auto [scheme_host, path] = split_url(config_.endpoint);

    FetchOutcome outcome;
    for (const auto& entity : entities) {
        for (const auto& predicate : keep) {
            const SchemaRelation* rel = relation_named(ontology_, predicate);
            std::string query = one_hop_query(entity, predicate);

            httplib::Client client(scheme_host);
            client.set_read_timeout(config_.timeout_seconds, 0);
            client.set_connection_timeout(config_.timeout_seconds, 0);
            httplib::Params params{{"query", query}};
            httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
            auto res = client.Get(path, params, headers);
            if (!res) {
                outcome.errors.push_back(
                    {entity.id, "sparql transport failure: " + httplib::to_string(res.error()),
                     true});
                continue;
            }
            if (res->status != 200) {
                outcome.errors.push_back(
                    {entity.id, "sparql endpoint returned HTTP " + std::to_string(res->status),
                     true});
                continue;
            }
            auto doc = nlohmann::json::parse(res->body, nullptr, false);
            if (doc.is_discarded() || !doc.contains("results")) {
                outcome.errors.push_back({entity.id, "sparql response is not a result set", false});
                continue;
            }

            for (const auto& row : doc["results"].value("bindings", nlohmann::json::array())) {
                if (!row.contains("o")) continue;
                const auto& binding = row["o"];
                std::string type = binding.value("type", "literal");
                std::string value = binding.value("value", "");

                Triple t;
                t.subject = entity;
                t.predicate = predicate;
                t.hop = hop;
                t.source = "sparql:" + entity.id + ":" + predicate;
                if (type == "uri") {
                    EntityRef object;
                    object.id = local_name(value);
                    object.label = object.id;
                    object.entity_type = rel && rel->object_is_entity ? rel->object_entity_type
                                                                      : kUntypedEntity;
                    t.object = std::move(object);
                } else {
                    Literal lit;
                    lit.value = value;
                    lit.datatype = rel && !rel->object_is_entity ? rel->object_datatype
                                                                 : LiteralKind::text;
                    t.object = std::move(lit);
                }
                outcome.triples.push_back(std::move(t));
            }
        }
    }
    return outcome;
}

std::optional<EntityRef> SparqlBackend::resolve_entity(std::string_view name,
                                                       std::string_view domain) const {
    (void)domain;
    auto matches = [&](const std::string& candidate) {
        if (candidate == name) return true;
        std::string folded(candidate), probe(name);
        std::replace(folded.begin(), folded.end(), '_', ' ');
        std::replace(probe.begin(), probe.end(), '_', ' ');
        std::transform(folded.begin(), folded.end(), folded.begin(), ::tolower);
        std::transform(probe.begin(), probe.end(), probe.begin(), ::tolower);
        return folded == probe;
    };
    for (const auto& candidate : config_.entity_list) {
        if (matches(candidate)) {
            std::string type = kUntypedEntity;
            // A single subject type in the ontology types the whole list.
            std::set<std::string> subject_types;
            for (const auto& rel : ontology_.relations()) subject_types.insert(rel.subject_type);
            if (subject_types.size() == 1) type = *subject_types.begin();
            return EntityRef{candidate, candidate, type};
        }
    }
    return std::nullopt;
}

std::shared_ptr<SparqlBackend> SparqlBackend::from_config(const SparqlConfig& config) {
    Ontology ontology;
    if (!config.ontology_path.empty()) {
        auto fixture = load_fixture(config.ontology_path);
        ontology = fixture->ontology();
    }
    return std::make_shared<SparqlBackend>(config, std::move(ontology));
}

}  // namespace kerag
