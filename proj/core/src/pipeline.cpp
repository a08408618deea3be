#include "kerag/pipeline.hpp"

namespace kerag {

AskOutcome answer_question(const QuestionRecord& question, const ChatClient& chat,
                           const KgBackend& backend, const PipelineConfig& config,
                           const EmbeddingProvider* embedder) {
    AskOutcome outcome;
    Planner planner(chat, backend, config.planner, embedder);

    try {
        outcome.plan = planner.build_plan(question.query, question.query_time, &outcome.trace,
                                          question.domain_hint);
    } catch (const PlanningError& e) {
        outcome.failure_reason = std::string("planning: ") + e.what();
    }

    if (outcome.plan) {
        try {
            RetrievalResult retrieval = execute_plan(*outcome.plan, backend);
            outcome.subgraph = std::move(retrieval.subgraph);
            outcome.fetch_errors = std::move(retrieval.errors);
        } catch (const RetrievalError& e) {
            outcome.failure_reason = std::string("retrieval: ") + e.what();
        }
    }

    if (!outcome.failure_reason.empty()) {
        outcome.answer.is_missing = true;
        outcome.answer.text = "I don't know";
        outcome.answer.mode = config.mode;
        outcome.answer.provider_called = false;
        return outcome;
    }

    outcome.evidence = linearize(outcome.subgraph, config.line_budget, &backend.ontology());
    outcome.answer = summarize(chat, question.query, outcome.evidence, question.query_time,
                               config.mode, config.summarize);
    return outcome;
}

}  // namespace kerag
