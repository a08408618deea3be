#include "kerag/kg/types.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace kerag {

std::string to_string(LiteralKind kind) {
    switch (kind) {
        case LiteralKind::text: return "text";
        case LiteralKind::number: return "number";
        case LiteralKind::date: return "date";
        case LiteralKind::datetime: return "datetime";
        case LiteralKind::structured: return "structured-record";
    }
    return "text";
}

std::optional<LiteralKind> literal_kind_from(std::string_view token) {
    if (token == "text") return LiteralKind::text;
    if (token == "number") return LiteralKind::number;
    if (token == "date") return LiteralKind::date;
    if (token == "datetime") return LiteralKind::datetime;
    if (token == "structured-record" || token == "structured") return LiteralKind::structured;
    return std::nullopt;
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool in_range(std::string_view s, int lo, int hi) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size() && v >= lo && v <= hi;
}

}  // namespace

bool parse_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    return all_digits(s.substr(0, 4)) && in_range(s.substr(5, 2), 1, 12) &&
           in_range(s.substr(8, 2), 1, 31);
}

bool parse_crag_datetime(std::string_view s) {
    // MM/DD/YYYY, HH:MM:SS TZ
    if (s.size() < 22) return false;
    if (s[2] != '/' || s[5] != '/' || s[10] != ',' || s[11] != ' ') return false;
    if (!in_range(s.substr(0, 2), 1, 12) || !in_range(s.substr(3, 2), 1, 31) ||
        !all_digits(s.substr(6, 4)))
        return false;
    std::string_view t = s.substr(12);
    if (t.size() < 10 || t[2] != ':' || t[5] != ':' || t[8] != ' ') return false;
    if (!in_range(t.substr(0, 2), 0, 23) || !in_range(t.substr(3, 2), 0, 59) ||
        !in_range(t.substr(6, 2), 0, 60))
        return false;
    return t.size() > 9;  // timezone token present
}

std::optional<std::string> crag_date_part(std::string_view query_time) {
    if (query_time.size() >= 10 && query_time[2] == '/' && query_time[5] == '/' &&
        in_range(query_time.substr(0, 2), 1, 12) && in_range(query_time.substr(3, 2), 1, 31) &&
        all_digits(query_time.substr(6, 4)))
        return std::string(query_time.substr(0, 10));
    return std::nullopt;
}

std::string crag_datetime_to_iso(std::string_view s) {
    if (!parse_crag_datetime(s)) return std::string(s);
    std::string out;
    out += s.substr(6, 4);
    out += '-';
    out += s.substr(0, 2);
    out += '-';
    out += s.substr(3, 2);
    out += ' ';
    out += s.substr(12);
    return out;
}

bool literal_value_valid(const Literal& lit) {
    switch (lit.datatype) {
        case LiteralKind::text:
        case LiteralKind::structured:
            return true;
        case LiteralKind::number: {
            if (lit.value.empty()) return false;
            char* end = nullptr;
            std::strtod(lit.value.c_str(), &end);
            return end == lit.value.c_str() + lit.value.size();
        }
        case LiteralKind::date:
            return parse_iso_date(lit.value);
        case LiteralKind::datetime:
            return parse_crag_datetime(lit.value);
    }
    return false;
}

std::string render_literal(const Literal& lit) {
    switch (lit.datatype) {
        case LiteralKind::text:
        case LiteralKind::number:
        case LiteralKind::date:
            return lit.value;
        case LiteralKind::datetime:
            return crag_datetime_to_iso(lit.value);
        case LiteralKind::structured: {
            auto parsed = nlohmann::json::parse(lit.value, nullptr, false);
            if (parsed.is_discarded()) return lit.value;
            return parsed.dump();  // nlohmann objects iterate key-sorted
        }
    }
    return lit.value;
}

bool is_entity(const NodeValue& v) { return std::holds_alternative<EntityRef>(v); }

const EntityRef* as_entity(const NodeValue& v) { return std::get_if<EntityRef>(&v); }

const Literal* as_literal(const NodeValue& v) { return std::get_if<Literal>(&v); }

std::string node_text(const NodeValue& v) {
    if (const auto* e = as_entity(v)) return e->label.empty() ? e->id : e->label;
    return render_literal(*as_literal(v));
}

std::string triple_key(const Triple& t) {
    std::string key = t.subject.id;
    key += '\x1f';
    key += t.predicate;
    key += '\x1f';
    if (const auto* e = as_entity(t.object)) {
        key += 'E';
        key += e->id;
    } else {
        const auto* l = as_literal(t.object);
        key += 'L';
        key += to_string(l->datatype);
        key += '\x1f';
        key += l->value;
    }
    return key;
}

void Ontology::add_relation(SchemaRelation rel) {
    for (const auto& existing : neighbors(rel.domain, rel.subject_type)) {
        if (existing.name == rel.name)
            throw ValidationError("duplicate relation '" + rel.name + "' for (" + rel.domain +
                                  ", " + rel.subject_type + ")");
    }
    if (rel.description.empty())
        throw ValidationError("relation '" + rel.name + "' has an empty description");
    if (!domain_set_.count(rel.domain)) {
        domain_set_.insert(rel.domain);
        domains_.push_back(rel.domain);
    }
    entity_types_.insert(rel.subject_type);
    if (rel.object_is_entity) entity_types_.insert(rel.object_entity_type);
    if (!declaration_index_.count(rel.name)) {
        declaration_index_[rel.name] = static_cast<int>(declaration_order_.size());
        declaration_order_.push_back(rel.name);
    }
    all_.push_back(rel);
    index_[{rel.domain, rel.subject_type}].push_back(std::move(rel));
}

bool Ontology::has_domain(std::string_view domain) const {
    return domain_set_.count(std::string(domain)) > 0;
}

bool Ontology::has_entity_type(std::string_view type) const {
    return type == kUntypedEntity || entity_types_.count(std::string(type)) > 0;
}

const std::vector<SchemaRelation>& Ontology::neighbors(std::string_view domain,
                                                       std::string_view entity_type) const {
    static const std::vector<SchemaRelation> kEmpty;
    auto it = index_.find({std::string(domain), std::string(entity_type)});
    return it == index_.end() ? kEmpty : it->second;
}

int Ontology::declaration_index(std::string_view relation_name) const {
    auto it = declaration_index_.find(std::string(relation_name));
    return it == declaration_index_.end() ? static_cast<int>(declaration_order_.size())
                                          : it->second;
}

std::vector<std::string> Ontology::predicate_names() const { return declaration_order_; }

const std::vector<SchemaRelation>& schema_neighbors(const Ontology& ontology,
                                                    std::string_view domain,
                                                    std::string_view entity_type) {
    return ontology.neighbors(domain, entity_type);
}

std::vector<SchemaRelation> offered_relations(const Ontology& ontology, std::string_view domain,
                                              std::span<const std::string> entity_types) {
    std::vector<SchemaRelation> offered;
    std::set<std::string> seen;
    auto take = [&](const SchemaRelation& rel) {
        if (seen.insert(rel.name).second) offered.push_back(rel);
    };
    for (const auto& type : entity_types) {
        if (type == kUntypedEntity) {
            for (const auto& rel : ontology.relations())
                if (rel.domain == domain) take(rel);
        } else {
            for (const auto& rel : ontology.neighbors(domain, type)) take(rel);
        }
    }
    std::sort(offered.begin(), offered.end(),
              [&](const SchemaRelation& a, const SchemaRelation& b) {
                  return ontology.declaration_index(a.name) < ontology.declaration_index(b.name);
              });
    return offered;
}

}  // namespace kerag
