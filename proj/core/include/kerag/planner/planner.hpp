#pragma once
#include "kerag/errors.hpp"
#include "kerag/kg/backend.hpp"
#include "kerag/llm/provider.hpp"
#include "kerag/planner/plan.hpp"

#include <span>

namespace kerag {

// Filter output had no relation selection and no control tag, twice in a
// row. build_plan tolerates one such round, then fails to missing.
struct FilterOutputError : PlanningError {
    using PlanningError::PlanningError;
};

// Pluggable text embedder for similarity-based filtering.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<float> embed(std::string_view text) const = 0;
};

// Desk-scale default: hashed character-trigram counts, L2-normalized.
// Deterministic and model-free.
class TrigramHashEmbedder : public EmbeddingProvider {
public:
    explicit TrigramHashEmbedder(size_t dims = 256) : dims_(dims) {}
    std::vector<float> embed(std::string_view text) const override;

private:
    size_t dims_;
};

double cosine_similarity(std::span<const float> a, std::span<const float> b);

// Removes the longest case-insensitive common substring with each label
// from the question (minimum length 3).
std::string remove_entity_mentions(std::string_view question,
                                   const std::vector<std::string>& labels);

struct ExtractionResult {
    std::vector<EntityRef> topic_entities;
    std::string domain;
    std::string raw_json;
};

// Context handed to filter_relations: the partial plan built so far.
struct PlanContext {
    std::string domain;
    std::vector<EntityRef> topic_entities;
    int hop = 1;
    std::vector<std::string> kept_so_far;
    std::string query_time;
};

// Builds retrieval plans: extract topic entities and domain, expand the
// schema neighborhood hop by hop, filter, and terminate.
class Planner {
public:
    Planner(const ChatClient& chat, const KgBackend& backend, PlannerConfig config,
            const EmbeddingProvider* embedder = nullptr);

    const PlannerConfig& config() const { return config_; }

    ExtractionResult extract_topic_and_domain(const std::string& question,
                                              const std::string& query_time) const;

    TimeFrame extract_time_frame(const std::string& question, const std::string& query_time) const;

    FilterDecision filter_relations(const std::string& question,
                                    const std::vector<SchemaRelation>& offered,
                                    const PlanContext& so_far) const;

    // domain_hint, when it names an ontology domain, overrides the
    // extracted domain; entities still come from extraction.
    RetrievalPlan build_plan(const std::string& question, const std::string& query_time,
                             PlanTrace* trace = nullptr,
                             const std::string& domain_hint = "") const;

private:
    FilterDecision filter_llm(const std::string& question,
                              const std::vector<SchemaRelation>& offered,
                              const PlanContext& so_far) const;
    FilterDecision filter_similarity(const std::string& question,
                                     const std::vector<SchemaRelation>& offered,
                                     const PlanContext& so_far) const;
    bool boundary_says_more(const std::string& question, const PlanContext& so_far,
                            const std::vector<std::string>& kept_now, bool* link_failure) const;

    const ChatClient* chat_;
    const KgBackend* backend_;
    PlannerConfig config_;
    const EmbeddingProvider* embedder_;
    TrigramHashEmbedder default_embedder_;
};

}  // namespace kerag
