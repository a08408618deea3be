#pragma once
#include "kerag/io/records.hpp"
#include "kerag/planner/planner.hpp"
#include "kerag/retriever/retriever.hpp"
#include "kerag/summarizer/summarizer.hpp"

namespace kerag {

struct PipelineConfig {
    PlannerConfig planner;
    SummarizeConfig summarize;
    SummarizeMode mode = SummarizeMode::cot;
    int line_budget = 200;
};

struct AskOutcome {
    std::optional<RetrievalPlan> plan;
    Subgraph subgraph;
    LinearizedEvidence evidence;
    Answer answer;
    std::vector<FetchError> fetch_errors;
    std::string failure_reason;  // set when planning/retrieval failed to missing
    PlanTrace trace;
};

// plan → retrieve → summarize for one question. Planning and retrieval
// errors terminate to a missing answer; infrastructure errors of a strict
// scripted run (script misses) propagate.
AskOutcome answer_question(const QuestionRecord& question, const ChatClient& chat,
                           const KgBackend& backend, const PipelineConfig& config,
                           const EmbeddingProvider* embedder = nullptr);

}  // namespace kerag
