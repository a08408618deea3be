#pragma once
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kerag {

inline constexpr const char* kUntypedEntity = "untyped";

// A node of the graph. For SPARQL backends the id is an IRI-derived name,
// for API backends the entity name itself.
struct EntityRef {
    std::string id;
    std::string label;
    std::string entity_type = kUntypedEntity;

    bool operator==(const EntityRef& o) const { return id == o.id; }
};

enum class LiteralKind { text, number, date, datetime, structured };

std::string to_string(LiteralKind kind);
std::optional<LiteralKind> literal_kind_from(std::string_view token);

struct Literal {
    std::string value;
    LiteralKind datatype = LiteralKind::text;
};

// Validates a literal value against its declared datatype:
// number must parse as decimal, date as YYYY-MM-DD,
// datetime as "MM/DD/YYYY, HH:MM:SS TZ".
bool literal_value_valid(const Literal& lit);

// Renders a literal for prompts: numbers and text verbatim, dates ISO,
// datetimes converted to "YYYY-MM-DD HH:MM:SS TZ", structured records as
// compact canonical text sorted by field name.
std::string render_literal(const Literal& lit);

using NodeValue = std::variant<EntityRef, Literal>;

bool is_entity(const NodeValue& v);
const EntityRef* as_entity(const NodeValue& v);
const Literal* as_literal(const NodeValue& v);
// Canonical text of the object position of a triple.
std::string node_text(const NodeValue& v);

struct Triple {
    EntityRef subject;
    std::string predicate;
    NodeValue object;
    int hop = 1;         // which expansion hop produced it
    std::string source;  // backend call descriptor
};

// Canonical (subject, predicate, object) key, ignoring hop and source.
std::string triple_key(const Triple& t);

// One typed relation of the schema. object is either an entity of a named
// type or an attribute of a literal datatype.
struct SchemaRelation {
    std::string name;
    std::string subject_type;
    bool object_is_entity = false;
    std::string object_entity_type;  // set when object_is_entity
    LiteralKind object_datatype = LiteralKind::text;
    std::string description;
    std::string domain;
};

// Schema index over (domain, entity_type). Lookup is total: unknown keys
// yield an empty list. Declaration order is preserved and canonical.
class Ontology {
public:
    void add_relation(SchemaRelation rel);

    const std::vector<std::string>& domains() const { return domains_; }
    bool has_domain(std::string_view domain) const;
    bool has_entity_type(std::string_view type) const;

    const std::vector<SchemaRelation>& neighbors(std::string_view domain,
                                                 std::string_view entity_type) const;

    // Declaration index of a relation name; relations not in the ontology
    // sort after all declared ones.
    int declaration_index(std::string_view relation_name) const;

    std::vector<std::string> predicate_names() const;  // declaration order, deduped
    size_t relation_count() const { return all_.size(); }
    const std::vector<SchemaRelation>& relations() const { return all_; }  // declaration order

private:
    std::vector<std::string> domains_;
    std::set<std::string> domain_set_;
    std::set<std::string> entity_types_;
    std::map<std::pair<std::string, std::string>, std::vector<SchemaRelation>> index_;
    std::vector<SchemaRelation> all_;
    std::vector<std::string> declaration_order_;
    std::map<std::string, int> declaration_index_;
};

// The relations offered for one (domain, entity type) pair, in declaration
// order. Total: unknown keys return an empty list.
const std::vector<SchemaRelation>& schema_neighbors(const Ontology& ontology,
                                                    std::string_view domain,
                                                    std::string_view entity_type);

// Union of schema_neighbors over a set of frontier types, deduped by name
// in declaration order. The untyped sentinel offers every relation of the
// domain, for backends whose entities carry no type information.
std::vector<SchemaRelation> offered_relations(const Ontology& ontology, std::string_view domain,
                                              std::span<const std::string> entity_types);

// Provenance-tagged triples gathered hop by hop. frontier holds the
// entities reachable for the next hop.
struct Subgraph {
    std::vector<Triple> triples;
    std::vector<EntityRef> frontier;
    int hops_done = 0;
};

// Date helpers for the fixture and query-time formats.
bool parse_iso_date(std::string_view s);                   // YYYY-MM-DD
bool parse_crag_datetime(std::string_view s);              // MM/DD/YYYY, HH:MM:SS TZ
std::optional<std::string> crag_date_part(std::string_view query_time);  // → MM/DD/YYYY
std::string crag_datetime_to_iso(std::string_view s);      // → YYYY-MM-DD HH:MM:SS TZ

}  // namespace kerag
