#pragma once
#include "kerag/eval/evalkit.hpp"
#include "kerag/pipeline.hpp"
#include "kerag/sft/forge.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace kerag {

// One run's configuration; exactly one backend spec. The backend spec is a
// fixture path, a SPARQL endpoint URL (http/https), or an API registry
// (.json) path.
struct RunConfig {
    std::string backend_spec;
    std::string provider_spec;  // scripted:<path> | http | empty (environment)
    std::string templates_dir;

    FilterMode filter_mode = FilterMode::llm;
    int max_hops = 3;  // must stay within [1, 3]
    int top_k = 30;
    int candidate_pairs = 3;
    SummarizeMode mode = SummarizeMode::cot;
    bool multi_entity = false;
    bool strict_evidence = true;
    int line_budget = 200;

    std::string out_dir;
    bool trace = false;
    int workers = 0;  // 0 → available parallelism
    JudgeStyle judge_style = JudgeStyle::crag;
    std::string request_log_path;

    // SPARQL backend extras.
    std::string sparql_ontology;
    std::string entity_iri_prefix;
    std::string predicate_iri_prefix;
};

void validate_config(const RunConfig& config);

// Backend, provider, templates, and request log assembled from a config.
struct RunEnv {
    BackendPtr backend;
    std::unique_ptr<Provider> provider;
    TemplateCatalog catalog;
    std::unique_ptr<RequestLog> request_log;
    std::string request_log_path;  // resolved from config or environment

    ChatClient chat() const { return ChatClient(catalog, *provider, request_log.get()); }
};

RunEnv build_env(const RunConfig& config);
PipelineConfig pipeline_config(const RunConfig& config);

// ask: plan → retrieve → summarize one question; prints the answer, the
// plan, and the triple count. Missing answers still exit 0.
int cmd_ask(const RunConfig& config, const std::string& question, const std::string& query_time,
            std::ostream& out);

// batch: one answer record per input question, input order preserved;
// per-question failures become missing answers with a reason.
std::vector<AnswerLine> cmd_batch(const RunConfig& config, const std::string& questions_path,
                                  const std::string& answers_path);

// eval: verdicts + metric report for an answers file against gold records.
MetricsReport cmd_eval(const RunConfig& config, const std::string& answers_path,
                       const std::string& gold_path);

// sft: corpus + stats from a training questions file.
SftStats cmd_sft(const RunConfig& config, const std::string& training_path);

struct AblationRow {
    std::string variant;  // "baseline", "-multihop", "-filter", "-CoT"
    MetricsReport report;
    long total_triples = 0;
};

// ablate: runs baseline plus each requested variant and emits a
// side-by-side report. Variant tokens: multihop, filter, cot.
std::vector<AblationRow> cmd_ablate(const RunConfig& config, const std::string& questions_path,
                                    const std::vector<std::string>& variants);

std::string render_ablation_text(const std::vector<AblationRow>& rows);

}  // namespace kerag
