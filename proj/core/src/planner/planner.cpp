#include "kerag/planner/planner.hpp"

#include "kerag/llm/tags.hpp"
#include "kerag/planner/trigram.hpp"
#include "kerag/util/hash.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace kerag {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_idk(const std::string& text) {
    return lowercase(text).find("i don't know") != std::string::npos;
}

// Extracts the first balanced {...} object from a completion.
std::optional<std::string> first_json_object(const std::string& text) {
    size_t start = text.find('{');
    if (start == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}') {
            --depth;
            if (depth == 0) return text.substr(start, i - start + 1);
        }
    }
    return std::nullopt;
}

// All <function=NAME> selections, in order of appearance.
std::vector<std::string> parse_function_selections(const std::string& text) {
    std::vector<std::string> names;
    size_t pos = 0;
    while ((pos = text.find("<function=", pos)) != std::string::npos) {
        size_t name_start = pos + 10;
        size_t name_end = text.find('>', name_start);
        if (name_end == std::string::npos) break;
        names.push_back(text.substr(name_start, name_end - name_start));
        pos = name_end + 1;
    }
    return names;
}

bool looks_like_crag_date(std::string_view s) {
    return s.size() == 10 && s[2] == '/' && s[5] == '/';
}

std::string join_labels(const std::vector<EntityRef>& entities) {
    std::string out;
    for (const auto& e : entities) {
        if (!out.empty()) out += ", ";
        out += e.label;
    }
    return out;
}

}  // namespace

std::vector<float> TrigramHashEmbedder::embed(std::string_view text) const {
    std::vector<float> vec(dims_, 0.0f);
    std::string normalized = trigram_normalize(text);
    std::string padded = "\x02\x02" + normalized + "\x03\x03";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
        uint64_t bucket = fnv1a64(std::string_view(padded).substr(i, 3)) % dims_;
        vec[bucket] += 1.0f;
    }
    float norm = 0.0f;
    for (float v : vec) norm += v * v;
    if (norm > 0.0f) {
        norm = std::sqrt(norm);
        for (float& v : vec) v /= norm;
    }
    return vec;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size() || a.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string remove_entity_mentions(std::string_view question,
                                   const std::vector<std::string>& labels) {
    std::string result(question);
    for (const auto& label : labels) {
        std::string q = lowercase(result);
        std::string l = lowercase(label);
        if (q.empty() || l.empty()) continue;
        // Longest common substring, case-insensitive.
        size_t best_len = 0, best_q = 0;
        std::vector<size_t> prev(l.size() + 1, 0), cur(l.size() + 1, 0);
        for (size_t i = 1; i <= q.size(); ++i) {
            for (size_t j = 1; j <= l.size(); ++j) {
                if (q[i - 1] == l[j - 1]) {
                    cur[j] = prev[j - 1] + 1;
                    if (cur[j] > best_len) {
                        best_len = cur[j];
                        best_q = i - best_len;
                    }
                } else {
                    cur[j] = 0;
                }
            }
            std::swap(prev, cur);
        }
        if (best_len >= 3) result.erase(best_q, best_len);
    }
    return result;
}

Planner::Planner(const ChatClient& chat, const KgBackend& backend, PlannerConfig config,
                 const EmbeddingProvider* embedder)
    : chat_(&chat), backend_(&backend), config_(std::move(config)), embedder_(embedder) {
    if (!embedder_) embedder_ = &default_embedder_;
    if (config_.max_hops < 1) throw ConfigError("planner max_hops must be >= 1");
}

ExtractionResult Planner::extract_topic_and_domain(const std::string& question,
                                                   const std::string& query_time) const {
    if (question.empty()) throw ArgumentError("extract_topic_and_domain: empty question");

    const Ontology& ontology = backend_->ontology();
    std::string domain_list;
    for (const auto& d : ontology.domains()) {
        if (!domain_list.empty()) domain_list += ", ";
        domain_list += "\"" + d + "\"";
    }
    std::string entity_mode =
        config_.multi_entity
            ? "If the query involves several entities (for example a comparison), include the "
              "key `entities` with a JSON array of all entity names."
            : "";

    ChatRequest request{"planning.entity_domain",
                        {{"QUERY", question},
                         {"QUERY_TIME", query_time},
                         {"DOMAINS", domain_list},
                         {"ENTITY_MODE", entity_mode}}};

    auto try_parse = [&](const std::string& text)
        -> std::optional<std::pair<std::string, std::vector<std::string>>> {
        auto blob = first_json_object(text);
        if (!blob) return std::nullopt;
        auto obj = nlohmann::json::parse(*blob, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) return std::nullopt;

        std::string domain = "other";
        if (obj.contains("domain") && obj["domain"].is_string())
            domain = obj["domain"].get<std::string>();
        std::vector<std::string> names;
        auto push_name = [&](const nlohmann::json& v) {
            if (v.is_string() && !v.get<std::string>().empty()) names.push_back(v.get<std::string>());
        };
        if (config_.multi_entity && obj.contains("entities") && obj["entities"].is_array())
            for (const auto& v : obj["entities"]) push_name(v);
        if (names.empty()) {
            static const char* kEntityKeys[] = {"main_entity", "market_identifier", "person",
                                                "movie_name",  "artist_name",       "song_name",
                                                "team",        "tournament",        "entity"};
            for (const char* key : kEntityKeys) {
                if (obj.contains(key)) push_name(obj[key]);
                if (!names.empty()) break;  // first matching key wins
            }
        }
        if (!config_.multi_entity && names.size() > 1) names.resize(1);
        if (names.empty()) return std::nullopt;
        return std::make_pair(domain, names);
    };

    ChatResponse response = chat_->complete(request);
    auto parsed = try_parse(response.text);
    if (!parsed) {
        response = chat_->complete(request);  // one re-prompt
        parsed = try_parse(response.text);
    }
    if (!parsed)
        throw PlanningError("topic/domain extraction output unparseable after re-prompt");

    auto [domain, names] = *parsed;
    if (domain != "other" && !ontology.has_domain(domain)) {
        // Unknown extracted domain routes to the open/encyclopedia domain
        // when the ontology has one, else to a sole domain, else "other".
        if (ontology.has_domain("open"))
            domain = "open";
        else if (ontology.has_domain("encyclopedia"))
            domain = "encyclopedia";
        else if (ontology.domains().size() == 1)
            domain = ontology.domains().front();
        else
            domain = "other";
    }

    ExtractionResult result;
    result.domain = domain;
    result.raw_json = response.text;
    for (const auto& name : names) {
        auto resolved = backend_->resolve_entity(name, domain);
        if (!resolved && backend_->kind() == BackendKind::sparql) {
            // Trigram pairing against the backend's entity/relation lists
            // links names the extraction could not resolve.
            auto entity_pool = backend_->entity_names();
            auto predicate_pool = backend_->predicate_names();
            if (!entity_pool.empty() && !predicate_pool.empty()) {
                auto pairs = ngram_candidate_pairs(question, entity_pool, predicate_pool,
                                                   config_.candidate_pairs);
                if (!pairs.empty()) resolved = backend_->resolve_entity(pairs[0].entity, domain);
            }
        }
        if (resolved)
            result.topic_entities.push_back(*resolved);
        else
            result.topic_entities.push_back(EntityRef{name, name, kUntypedEntity});
    }
    return result;
}

TimeFrame Planner::extract_time_frame(const std::string& question,
                                      const std::string& query_time) const {
    auto default_date = crag_date_part(query_time);
    if (!default_date)
        throw ArgumentError("extract_time_frame: query_time is not parseable: " + query_time);

    ChatRequest request{"planning.time_cot",
                        {{"QUERY", question}, {"QUERY_TIME", query_time}}};
    ChatResponse response = chat_->complete(request);

    TimeFrame fallback{*default_date, "", false, true};

    // The completion encloses its extracted frame in the last <...> span.
    size_t close = response.text.rfind('>');
    if (close == std::string::npos) return fallback;
    size_t open = response.text.rfind('<', close);
    if (open == std::string::npos || close <= open + 1) return fallback;
    std::string inside = response.text.substr(open + 1, close - open - 1);

    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t");
        size_t b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };

    TimeFrame frame;
    size_t tilde = inside.find('~');
    if (tilde == std::string::npos) {
        frame.start = trim(inside);
        if (!looks_like_crag_date(frame.start)) return fallback;
    } else {
        frame.start = trim(inside.substr(0, tilde));
        std::string end = trim(inside.substr(tilde + 1));
        if (!looks_like_crag_date(frame.start)) return fallback;
        if (end == "future") {
            frame.open_ended = true;
        } else {
            if (!looks_like_crag_date(end)) return fallback;
            frame.end = end;
        }
    }
    return frame;
}

bool Planner::boundary_says_more(const std::string& question, const PlanContext& so_far,
                                 const std::vector<std::string>& kept_now,
                                 bool* link_failure) const {
    const Ontology& ontology = backend_->ontology();
    std::string triples;
    auto add_line = [&](const std::string& name) {
        for (const auto& rel : ontology.relations()) {
            if (rel.name != name) continue;
            if (!triples.empty()) triples += "\n";
            triples += "TRIPLE: (" + rel.subject_type + ", " + rel.name + ", " +
                       (rel.object_is_entity ? rel.object_entity_type
                                             : to_string(rel.object_datatype)) +
                       ")";
            break;
        }
    };
    for (const auto& name : so_far.kept_so_far) add_line(name);
    for (const auto& name : kept_now) add_line(name);
    if (triples.empty()) triples = "(none)";

    ChatRequest request{"filter.hop_boundary", {{"QUESTION", question}, {"TRIPLES", triples}}};
    ChatResponse response = chat_->complete(request);
    std::string tag = parse_tagged(response.text, {"<NO>", "<NA>", "<YES>"});
    if (tag == "<NA>") {
        *link_failure = true;
        return false;
    }
    return tag == "<NO>";
}

FilterDecision Planner::filter_llm(const std::string& question,
                                   const std::vector<SchemaRelation>& offered,
                                   const PlanContext& so_far) const {
    std::string functions;
    for (const auto& rel : offered) {
        if (!functions.empty()) functions += "\n\n";
        functions += backend_->tool_catalog_entry(rel);
    }
    std::string plan_desc = "domain=" + so_far.domain + " hop=" + std::to_string(so_far.hop);
    if (!so_far.kept_so_far.empty()) {
        plan_desc += " kept_so_far=";
        for (size_t i = 0; i < so_far.kept_so_far.size(); ++i) {
            if (i) plan_desc += ",";
            plan_desc += so_far.kept_so_far[i];
        }
    }

    ChatRequest request{"filter.tools",
                        {{"TOPIC_ENTITY", join_labels(so_far.topic_entities)},
                         {"PLAN", plan_desc},
                         {"FUNCTIONS", functions},
                         {"QUERY_TIME", so_far.query_time},
                         {"QUESTION", question}}};

    struct Selection {
        std::vector<std::string> names;
        bool idk = false;
        bool has_continue = false;
    };
    auto parse_selection = [&](const std::string& text) -> std::optional<Selection> {
        Selection sel;
        sel.names = parse_function_selections(text);
        sel.idk = contains_idk(text);
        sel.has_continue = text.find("<CONTINUE>") != std::string::npos;
        if (sel.names.empty() && !sel.idk && !sel.has_continue) return std::nullopt;
        return sel;
    };

    ChatResponse response = chat_->complete(request);
    auto selection = parse_selection(response.text);
    if (!selection) {
        response = chat_->complete(request);  // one re-prompt
        selection = parse_selection(response.text);
    }
    if (!selection)
        throw FilterOutputError("filter output had no relation selection and no control tag");

    std::set<std::string> selected_set(selection->names.begin(), selection->names.end());
    FilterDecision decision;
    for (const auto& rel : offered) {
        if (selected_set.count(rel.name))
            decision.kept.push_back(rel.name);
        else
            decision.dropped.push_back(rel.name);
    }

    if (backend_->kind() == BackendKind::api) {
        decision.sufficient = !selection->has_continue;
    } else if (selection->idk && decision.kept.empty()) {
        decision.sufficient = true;
    } else {
        bool link_failure = false;
        try {
            decision.sufficient =
                !boundary_says_more(question, so_far, decision.kept, &link_failure);
        } catch (const TagParseError&) {
            try {
                decision.sufficient =
                    !boundary_says_more(question, so_far, decision.kept, &link_failure);
            } catch (const TagParseError&) {
                throw FilterOutputError("hop boundary completion carried no <NO>/<NA>/<YES> tag");
            }
        }
        decision.entity_link_failure = link_failure;
    }
    return decision;
}

FilterDecision Planner::filter_similarity(const std::string& question,
                                          const std::vector<SchemaRelation>& offered,
                                          const PlanContext& so_far) const {
    std::vector<std::string> labels;
    for (const auto& e : so_far.topic_entities) labels.push_back(e.label);
    std::string stripped = remove_entity_mentions(question, labels);
    std::vector<float> question_vec = embedder_->embed(stripped);

    std::vector<std::pair<size_t, double>> scored;
    scored.reserve(offered.size());
    for (size_t i = 0; i < offered.size(); ++i) {
        std::vector<float> vec = embedder_->embed(offered[i].description);
        scored.emplace_back(i, cosine_similarity(question_vec, vec));
    }
    // Stable sort keeps declaration order on ties.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    size_t keep_count = std::min<size_t>(static_cast<size_t>(config_.top_k), scored.size());
    std::vector<bool> keep_mask(offered.size(), false);
    FilterDecision decision;
    for (size_t i = 0; i < keep_count; ++i) {
        decision.kept.push_back(offered[scored[i].first].name);
        keep_mask[scored[i].first] = true;
    }
    for (size_t i = 0; i < offered.size(); ++i)
        if (!keep_mask[i]) decision.dropped.push_back(offered[i].name);

    if (config_.boundary_check) {
        bool link_failure = false;
        try {
            decision.sufficient =
                !boundary_says_more(question, so_far, decision.kept, &link_failure);
        } catch (const TagParseError&) {
            try {
                decision.sufficient =
                    !boundary_says_more(question, so_far, decision.kept, &link_failure);
            } catch (const TagParseError&) {
                throw FilterOutputError("hop boundary completion carried no <NO>/<NA>/<YES> tag");
            }
        }
        decision.entity_link_failure = link_failure;
    } else {
        decision.sufficient = true;  // one hop unless the boundary tag asks for more
    }
    return decision;
}

FilterDecision Planner::filter_relations(const std::string& question,
                                         const std::vector<SchemaRelation>& offered,
                                         const PlanContext& so_far) const {
    if (offered.empty()) throw ArgumentError("filter_relations: offered must be non-empty");
    switch (config_.filter_mode) {
        case FilterMode::none: {
            FilterDecision decision;
            for (const auto& rel : offered) decision.kept.push_back(rel.name);
            decision.sufficient = false;
            return decision;
        }
        case FilterMode::similarity:
            return filter_similarity(question, offered, so_far);
        case FilterMode::llm:
            return filter_llm(question, offered, so_far);
    }
    throw ConfigError("unknown filter mode");
}

RetrievalPlan Planner::build_plan(const std::string& question, const std::string& query_time,
                                  PlanTrace* trace, const std::string& domain_hint) const {
    ExtractionResult extraction = extract_topic_and_domain(question, query_time);
    if (trace) trace->extraction_raw = extraction.raw_json;

    RetrievalPlan plan;
    plan.domain = !domain_hint.empty() && backend_->ontology().has_domain(domain_hint)
                      ? domain_hint
                      : extraction.domain;
    plan.topic_entities = extraction.topic_entities;
    if (plan.domain != extraction.domain) {
        // Re-resolve under the hinted domain; typing can differ per domain.
        for (auto& entity : plan.topic_entities)
            if (auto resolved = backend_->resolve_entity(entity.label, plan.domain))
                entity = *resolved;
    }
    if (config_.extract_time && !query_time.empty() && crag_date_part(query_time))
        plan.time_frame = extract_time_frame(question, query_time);

    const Ontology& ontology = backend_->ontology();
    std::vector<std::string> frontier_types;
    for (const auto& entity : plan.topic_entities)
        if (std::find(frontier_types.begin(), frontier_types.end(), entity.entity_type) ==
            frontier_types.end())
            frontier_types.push_back(entity.entity_type);

    PlanContext context{plan.domain, plan.topic_entities, 1, {}, query_time};
    bool malformed_seen = false;
    int hops = 0;

    for (int hop = 1; hop <= config_.max_hops; ++hop) {
        context.hop = hop;
        std::vector<SchemaRelation> offered =
            offered_relations(ontology, plan.domain, frontier_types);

        if (offered.empty()) {
            if (hop == 1) {
                plan.excluded.push_back({});
                if (trace) trace->hops.push_back({});
                hops = 1;
            } else {
                hops = hop - 1;  // exhausted relevant relations
            }
            break;
        }

        auto record_hop = [&](const std::vector<std::string>& kept,
                              const std::vector<std::string>& dropped, bool sufficient) {
            if (!trace) return;
            PlanTrace::HopRecord record;
            for (const auto& rel : offered) record.offered.push_back(rel.name);
            record.kept = kept;
            record.dropped = dropped;
            record.sufficient = sufficient;
            trace->hops.push_back(std::move(record));
        };

        FilterDecision decision;
        try {
            decision = filter_relations(question, offered, context);
        } catch (const FilterOutputError&) {
            if (malformed_seen)
                throw PlanningError("filter output malformed on a repeat round; aborting");
            malformed_seen = true;
            // Everything excluded this hop; the frontier stays put so the
            // next round re-offers the same relations.
            std::set<std::string> excluded_now;
            std::vector<std::string> dropped;
            for (const auto& rel : offered) {
                excluded_now.insert(rel.name);
                dropped.push_back(rel.name);
            }
            plan.excluded.push_back(std::move(excluded_now));
            record_hop({}, dropped, false);
            hops = hop;
            continue;
        }
        if (decision.entity_link_failure)
            throw PlanningError("filter judged the topic entity wrongly linked (<NA>)");

        std::set<std::string> kept_set(decision.kept.begin(), decision.kept.end());
        std::set<std::string> excluded_now;
        for (const auto& rel : offered)
            if (!kept_set.count(rel.name)) excluded_now.insert(rel.name);
        plan.excluded.push_back(std::move(excluded_now));
        record_hop(decision.kept, decision.dropped, decision.sufficient);
        for (const auto& name : decision.kept) context.kept_so_far.push_back(name);

        hops = hop;
        if (decision.sufficient) break;

        std::vector<std::string> next_types;
        for (const auto& rel : offered) {
            if (!kept_set.count(rel.name) || !rel.object_is_entity) continue;
            if (std::find(next_types.begin(), next_types.end(), rel.object_entity_type) ==
                next_types.end())
                next_types.push_back(rel.object_entity_type);
        }
        if (next_types.empty()) break;  // nothing left to expand
        frontier_types = std::move(next_types);
    }

    plan.hops = std::max(hops, 1);
    if (plan.excluded.empty()) plan.excluded.push_back({});
    validate_plan(plan, config_.max_hops);
    return plan;
}

}  // namespace kerag
