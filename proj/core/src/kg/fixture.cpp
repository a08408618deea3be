#include "kerag/kg/fixture.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace kerag {

namespace {

std::vector<std::string> split_tabs(const std::string& line, size_t max_fields) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (fields.size() + 1 < max_fields) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) break;
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    fields.push_back(line.substr(start));
    return fields;
}

std::string fold_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (unsigned char c : name) {
        if (c == '_') c = ' ';
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

const SchemaRelation* find_relation(const Ontology& ontology, std::string_view subject_type,
                                    std::string_view predicate) {
    for (const auto& domain : ontology.domains()) {
        for (const auto& rel : ontology.neighbors(domain, subject_type)) {
            if (rel.name == predicate) return &rel;
        }
    }
    return nullptr;
}

}  // namespace

MemoryBackend::MemoryBackend(Ontology ontology, std::vector<Edge> edges)
    : ontology_(std::move(ontology)), edges_(std::move(edges)) {
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        by_subject_[e.subject.id].push_back(i);
        auto note = [&](const EntityRef& ref) {
            if (!entities_.count(ref.id)) {
                entities_[ref.id] = ref;
                entities_folded_.emplace(fold_name(ref.id), ref.id);
            }
        };
        note(e.subject);
        if (const auto* obj = as_entity(e.object)) note(*obj);
    }
}

FetchOutcome MemoryBackend::fetch_neighbors(std::span<const EntityRef> entities,
                                            std::span<const std::string> keep, int hop) const {
    check_fetch_preconditions(keep, hop);
    std::set<std::string> keep_set(keep.begin(), keep.end());
    FetchOutcome out;
    for (const auto& entity : entities) {
        auto it = by_subject_.find(entity.id);
        if (it == by_subject_.end()) continue;
        for (size_t idx : it->second) {
            const Edge& e = edges_[idx];
            if (!keep_set.count(e.predicate)) continue;
            Triple t;
            t.subject = e.subject;
            t.predicate = e.predicate;
            t.object = e.object;
            t.hop = hop;
            t.source = "memory:" + e.subject.id + ":" + e.predicate;
            out.triples.push_back(std::move(t));
        }
    }
    return out;
}

std::optional<EntityRef> MemoryBackend::resolve_entity(std::string_view name,
                                                       std::string_view domain) const {
    (void)domain;
    auto it = entities_.find(std::string(name));
    if (it != entities_.end()) return it->second;
    auto folded = entities_folded_.find(fold_name(name));
    if (folded != entities_folded_.end()) return entities_.at(folded->second);
    return std::nullopt;
}

std::vector<std::string> MemoryBackend::entity_names() const {
    std::vector<std::string> names;
    names.reserve(entities_.size());
    for (const auto& [id, ref] : entities_) names.push_back(id);
    return names;
}

std::shared_ptr<MemoryBackend> load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open fixture file: " + path);
    return parse_fixture(in, path);
}

std::shared_ptr<MemoryBackend> parse_fixture(std::istream& in, const std::string& source_name) {
    Ontology ontology;
    std::vector<Edge> edges;
    std::string line;
    int line_no = 0;

    auto fail = [&](const std::string& what) -> void { throw FormatError(source_name, line_no, what); };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "[ontology]" || line == "[triples]") continue;

        if (line.rfind("REL\t", 0) == 0) {
            auto fields = split_tabs(line, 6);
            if (fields.size() != 6) fail("REL line needs 6 tab-separated fields");
            SchemaRelation rel;
            rel.domain = fields[1];
            rel.subject_type = fields[2];
            rel.name = fields[3];
            const std::string& object_spec = fields[4];
            rel.description = fields[5];
            if (object_spec.rfind("entity:", 0) == 0) {
                rel.object_is_entity = true;
                rel.object_entity_type = object_spec.substr(7);
                if (rel.object_entity_type.empty()) fail("entity object spec needs a type name");
            } else if (object_spec.rfind("attr:", 0) == 0) {
                auto kind = literal_kind_from(object_spec.substr(5));
                if (!kind) fail("unknown attribute datatype '" + object_spec.substr(5) + "'");
                rel.object_is_entity = false;
                rel.object_datatype = *kind;
            } else {
                fail("object spec must start with entity: or attr:");
            }
            if (rel.name.empty() || rel.domain.empty() || rel.subject_type.empty())
                fail("REL line has an empty field");
            try {
                ontology.add_relation(std::move(rel));
            } catch (const ValidationError& e) {
                fail(e.what());
            }
        } else if (line.rfind("T\t", 0) == 0) {
            auto fields = split_tabs(line, 5);
            if (fields.size() != 5) fail("T line needs 5 tab-separated fields");
            Edge edge;
            edge.subject.id = fields[1];
            edge.subject.label = fields[1];
            edge.subject.entity_type = fields[2];
            edge.predicate = fields[3];
            const std::string& object_spec = fields[4];
            if (edge.subject.id.empty()) fail("empty subject id");

            const SchemaRelation* rel = find_relation(ontology, edge.subject.entity_type,
                                                      edge.predicate);
            if (!rel)
                throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                      ": triple uses undeclared relation '" + edge.predicate +
                                      "' for subject type '" + edge.subject.entity_type + "'");
            if (!ontology.has_entity_type(edge.subject.entity_type))
                throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                      ": dangling subject entity type '" +
                                      edge.subject.entity_type + "'");

            if (object_spec.rfind("E:", 0) == 0) {
                size_t type_sep = object_spec.rfind(':');
                if (type_sep <= 1 || type_sep == object_spec.size() - 1)
                    fail("entity object needs E:<id>:<type>");
                EntityRef obj;
                obj.id = object_spec.substr(2, type_sep - 2);
                obj.label = obj.id;
                obj.entity_type = object_spec.substr(type_sep + 1);
                if (obj.id.empty()) fail("empty object entity id");
                if (!rel->object_is_entity)
                    throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                          ": relation '" + rel->name +
                                          "' declares an attribute object, triple has an entity");
                if (!ontology.has_entity_type(obj.entity_type))
                    throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                          ": dangling object entity type '" + obj.entity_type +
                                          "'");
                if (obj.entity_type != rel->object_entity_type)
                    throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                          ": relation '" + rel->name + "' expects object type '" +
                                          rel->object_entity_type + "', got '" + obj.entity_type +
                                          "'");
                edge.object = std::move(obj);
            } else if (object_spec.rfind("L:", 0) == 0) {
                size_t kind_sep = object_spec.find(':', 2);
                if (kind_sep == std::string::npos) fail("literal object needs L:<datatype>:<value>");
                auto kind = literal_kind_from(object_spec.substr(2, kind_sep - 2));
                if (!kind) fail("unknown literal datatype '" + object_spec.substr(2, kind_sep - 2) + "'");
                Literal lit;
                lit.datatype = *kind;
                lit.value = object_spec.substr(kind_sep + 1);
                if (rel->object_is_entity)
                    throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                          ": relation '" + rel->name +
                                          "' declares an entity object, triple has a literal");
                if (lit.datatype != rel->object_datatype)
                    throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                          ": relation '" + rel->name + "' expects datatype " +
                                          to_string(rel->object_datatype) + ", got " +
                                          to_string(lit.datatype));
                if (!literal_value_valid(lit))
                    fail("literal value '" + lit.value + "' does not parse as " +
                         to_string(lit.datatype));
                edge.object = std::move(lit);
            } else {
                fail("object spec must start with E: or L:");
            }
            edges.push_back(std::move(edge));
        } else {
            fail("unrecognized line (expected REL, T, comment, or section header)");
        }
    }

    return std::make_shared<MemoryBackend>(std::move(ontology), std::move(edges));
}

std::string write_fixture(const Ontology& ontology, const std::vector<Edge>& edges) {
    std::ostringstream out;
    out << "[ontology]\n";
    for (const auto& rel : ontology.relations()) {
        out << "REL\t" << rel.domain << '\t' << rel.subject_type << '\t' << rel.name << '\t';
        if (rel.object_is_entity)
            out << "entity:" << rel.object_entity_type;
        else
            out << "attr:" << to_string(rel.object_datatype);
        out << '\t' << rel.description << '\n';
    }
    out << "[triples]\n";
    for (const auto& edge : edges) {
        out << "T\t" << edge.subject.id << '\t' << edge.subject.entity_type << '\t'
            << edge.predicate << '\t';
        if (const auto* e = as_entity(edge.object))
            out << "E:" << e->id << ':' << e->entity_type;
        else {
            const auto* l = as_literal(edge.object);
            out << "L:" << to_string(l->datatype) << ':' << l->value;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace kerag
