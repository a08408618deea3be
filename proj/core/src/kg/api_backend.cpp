#include "kerag/kg/api_backend.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace kerag {

size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

// Flattens one level of a structured result. Nested objects flatten once
// with dotted predicates; anything deeper becomes a structured-record
// literal. Arrays yield one triple per element.
void flatten_value(const EntityRef& subject, const std::string& predicate,
                   const nlohmann::json& value, const FunctionSpec& spec, int hop,
                   const std::string& source, bool allow_nesting, std::vector<Triple>& out) {
    auto push = [&](NodeValue node) {
        Triple t;
        t.subject = subject;
        t.predicate = predicate;
        t.object = std::move(node);
        t.hop = hop;
        t.source = source;
        out.push_back(std::move(t));
    };

    if (value.is_object()) {
        if (allow_nesting) {
            for (const auto& [key, nested] : value.items())
                flatten_value(subject, predicate + "." + key, nested, spec, hop, source, false,
                              out);
        } else {
            push(Literal{value.dump(), LiteralKind::structured});
        }
        return;
    }
    if (value.is_array()) {
        for (const auto& element : value)
            flatten_value(subject, predicate, element, spec, hop, source, false, out);
        return;
    }
    if (value.is_string()) {
        if (spec.object_is_entity) {
            push(EntityRef{value.get<std::string>(), value.get<std::string>(),
                           spec.object_entity_type});
        } else {
            push(Literal{value.get<std::string>(), LiteralKind::text});
        }
        return;
    }
    if (value.is_number()) {
        push(Literal{value.dump(), LiteralKind::number});
        return;
    }
    if (value.is_boolean()) {
        push(Literal{value.get<bool>() ? "true" : "false", LiteralKind::text});
        return;
    }
    // null → skipped
}

}  // namespace

void ApiBackend::register_function(FunctionSpec spec, ApiHandler handler) {
    if (spec.name.empty()) throw ConfigError("api function needs a name");
    if (functions_.count(spec.name))
        throw ConfigError("api function registered twice: " + spec.name);

    SchemaRelation rel;
    rel.name = spec.name;
    rel.subject_type = spec.subject_type;
    rel.object_is_entity = spec.object_is_entity;
    rel.object_entity_type = spec.object_entity_type;
    rel.object_datatype = spec.object_datatype;
    rel.description = spec.description.empty() ? spec.name : spec.description;
    rel.domain = spec.domain;
    ontology_.add_relation(rel);

    if (!domain_entity_types_.count(spec.domain))
        domain_entity_types_[spec.domain] = spec.subject_type;

    std::string name = spec.name;
    functions_[std::move(name)] = {std::move(spec), std::move(handler)};
}

const FunctionSpec* ApiBackend::find_function(std::string_view name) const {
    auto it = functions_.find(name);
    return it == functions_.end() ? nullptr : &it->second.spec;
}

std::vector<Triple> ApiBackend::api_dispatch(const std::string& function_name, const ArgMap& args,
                                             int hop) const {
    auto it = functions_.find(function_name);
    if (it == functions_.end()) {
        std::string nearest;
        size_t best = SIZE_MAX;
        for (const auto& [name, entry] : functions_) {
            size_t d = edit_distance(function_name, name);
            if (d < best) {
                best = d;
                nearest = name;
            }
        }
        std::string hint = nearest.empty() ? "" : "; nearest declared function is '" + nearest + "'";
        throw RegistryError("unknown api function '" + function_name + "'" + hint);
    }

    const Entry& entry = it->second;
    for (const auto& required : entry.spec.required_args) {
        if (!args.count(required))
            throw ArgumentError("api function '" + function_name + "' requires argument '" +
                                required + "'");
    }
    // Extra/unknown args are ignored.

    std::string result_text = entry.handler(args);
    auto result = nlohmann::json::parse(result_text, nullptr, false);
    if (result.is_discarded())
        throw FormatError("api function '" + function_name + "' returned non-JSON content");

    std::string entity_id;
    if (auto arg = args.find(entry.spec.entity_arg); arg != args.end()) entity_id = arg->second;
    EntityRef subject{entity_id.empty() ? function_name : entity_id,
                      entity_id.empty() ? function_name : entity_id, entry.spec.subject_type};

    std::string source = "api:" + function_name + "(" + entity_id + ")";
    std::vector<Triple> triples;
    if (result.is_object()) {
        for (const auto& [key, value] : result.items())
            flatten_value(subject, key, value, entry.spec, hop, source, true, triples);
    } else {
        // Scalar / array results take the function name as the predicate.
        flatten_value(subject, function_name, result, entry.spec, hop, source, true, triples);
    }
    return triples;
}

FetchOutcome ApiBackend::fetch_neighbors(std::span<const EntityRef> entities,
                                         std::span<const std::string> keep, int hop) const {
    check_fetch_preconditions(keep, hop);
    FetchOutcome outcome;
    for (const auto& entity : entities) {
        for (const auto& function_name : keep) {
            auto it = functions_.find(function_name);
            if (it == functions_.end()) continue;
            const Entry& entry = it->second;
            if (entry.spec.subject_type != entity.entity_type) continue;
            ArgMap args;
            if (!entry.spec.entity_arg.empty()) args[entry.spec.entity_arg] = entity.id;
            try {
                auto triples = api_dispatch(function_name, args, hop);
                for (auto& t : triples) outcome.triples.push_back(std::move(t));
            } catch (const Error& e) {
                outcome.errors.push_back({entity.id, e.what(), false});
            }
        }
    }
    return outcome;
}

std::optional<EntityRef> ApiBackend::resolve_entity(std::string_view name,
                                                    std::string_view domain) const {
    auto it = domain_entity_types_.find(std::string(domain));
    if (it == domain_entity_types_.end()) return std::nullopt;
    return EntityRef{std::string(name), std::string(name), it->second};
}

std::string ApiBackend::tool_catalog_entry(const SchemaRelation& rel) const {
    const FunctionSpec* spec = find_function(rel.name);
    if (!spec) return KgBackend::tool_catalog_entry(rel);

    nlohmann::ordered_json properties = nlohmann::ordered_json::object();
    nlohmann::ordered_json required = nlohmann::ordered_json::array();
    if (!spec->entity_arg.empty())
        properties[spec->entity_arg] = {{"type", "string"},
                                        {"description", "The " + spec->subject_type +
                                                            " name of the entity interested."}};
    for (const auto& arg : spec->required_args) {
        if (!properties.contains(arg))
            properties[arg] = {{"type", "string"}, {"description", "The " + arg + " interested."}};
        required.push_back(arg);
    }
    nlohmann::ordered_json tool = {{"type", "function"},
                                   {"function",
                                    {{"name", spec->name},
                                     {"description", spec->description},
                                     {"parameters",
                                      {{"type", "object"},
                                       {"properties", properties},
                                       {"required", required}}}}}};
    return "Use the function '" + spec->name + "' to '" + spec->description + "':\n" + tool.dump();
}

std::shared_ptr<ApiBackend> ApiBackend::load_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open api registry: " + path);
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("functions"))
        throw FormatError("api registry must be a JSON object with a 'functions' array: " + path);

    auto backend = std::make_shared<ApiBackend>();
    for (const auto& fn : doc["functions"]) {
        FunctionSpec spec;
        spec.name = fn.value("name", "");
        spec.description = fn.value("description", "");
        spec.domain = fn.value("domain", "api");
        spec.subject_type = fn.value("subject_type", "entity");
        spec.entity_arg = fn.value("entity_arg", "");
        if (fn.contains("required"))
            for (const auto& arg : fn["required"]) spec.required_args.push_back(arg);
        if (fn.contains("object")) {
            const auto& object = fn["object"];
            if (object.value("kind", "attribute") == "entity") {
                spec.object_is_entity = true;
                spec.object_entity_type = object.value("type", "entity");
            } else if (auto kind = literal_kind_from(object.value("datatype", "text"))) {
                spec.object_datatype = *kind;
            }
        }

        std::map<std::string, std::string> responses;
        if (fn.contains("responses"))
            for (const auto& [entity, body] : fn["responses"].items())
                responses[entity] = body.dump();
        std::string default_response =
            fn.contains("default_response") ? fn["default_response"].dump() : "";
        std::string entity_arg = spec.entity_arg;
        std::string name = spec.name;

        backend->register_function(
            std::move(spec),
            [responses = std::move(responses), default_response, entity_arg,
             name](const ArgMap& args) -> std::string {
                std::string key;
                if (auto it = args.find(entity_arg); it != args.end()) key = it->second;
                if (auto it = responses.find(key); it != responses.end()) return it->second;
                if (!default_response.empty()) return default_response;
                throw DataError("api registry has no canned response of '" + name + "' for '" +
                                key + "'");
            });
    }
    return backend;
}

}  // namespace kerag
