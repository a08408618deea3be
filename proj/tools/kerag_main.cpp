// kerag: schema-guided multi-hop KG retrieval with LLM filtering and
// CoT summarization. Subcommands: ask, batch, eval, sft, ablate.

#include "kerag/cli/commands.hpp"
#include "kerag/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfra = 4;

void add_common_options(CLI::App* cmd, kerag::RunConfig& config, std::string& filter_mode,
                        std::string& mode, std::string& judge_style) {
    cmd->add_option("--backend", config.backend_spec,
                    "Backend: fixture path, SPARQL endpoint URL, or API registry (.json)")
        ->required();
    cmd->add_option("--provider", config.provider_spec,
                    "Provider: scripted:<path> or http (default: environment)");
    cmd->add_option("--templates", config.templates_dir, "Prompt template directory");
    cmd->add_option("--filter-mode", filter_mode, "Relation filter: llm, similarity, none");
    cmd->add_option("--max-hops", config.max_hops, "Maximum expansion hops (1-3)");
    cmd->add_option("--top-k", config.top_k, "Similarity filter keeps the top k relations");
    cmd->add_option("--candidate-pairs", config.candidate_pairs,
                    "Maximum trigram candidate pairs per query");
    cmd->add_option("--mode", mode, "Summarization mode: cot or plain");
    cmd->add_flag("--multi-entity", config.multi_entity, "Extract a list of topic entities");
    cmd->add_flag("--strict-evidence,!--no-strict-evidence", config.strict_evidence,
                  "Answer missing without an LLM call when evidence is empty");
    cmd->add_option("--line-budget", config.line_budget, "Maximum evidence lines per prompt");
    cmd->add_option("--out", config.out_dir, "Output directory for run artifacts");
    cmd->add_flag("--trace", config.trace, "Print planning and retrieval trace");
    cmd->add_option("--workers", config.workers, "Worker pool size (default: parallelism)");
    cmd->add_option("--judge-style", judge_style, "Judge prompt style: crag or head2tail");
    cmd->add_option("--request-log", config.request_log_path, "Write a request log (JSONL)");
    cmd->add_option("--sparql-ontology", config.sparql_ontology,
                    "Fixture file providing the SPARQL backend's ontology");
    cmd->add_option("--entity-prefix", config.entity_iri_prefix, "Entity IRI prefix");
    cmd->add_option("--predicate-prefix", config.predicate_iri_prefix, "Predicate IRI prefix");
}

bool apply_enums(kerag::RunConfig& config, const std::string& filter_mode, const std::string& mode,
                 const std::string& judge_style) {
    if (!filter_mode.empty()) {
        auto parsed = kerag::filter_mode_from(filter_mode);
        if (!parsed) {
            std::cerr << "error: unknown filter mode '" << filter_mode << "'\n";
            return false;
        }
        config.filter_mode = *parsed;
    }
    if (!mode.empty()) {
        auto parsed = kerag::summarize_mode_from(mode);
        if (!parsed) {
            std::cerr << "error: unknown summarization mode '" << mode << "'\n";
            return false;
        }
        config.mode = *parsed;
    }
    if (!judge_style.empty()) {
        auto parsed = kerag::judge_style_from(judge_style);
        if (!parsed) {
            std::cerr << "error: unknown judge style '" << judge_style << "'\n";
            return false;
        }
        config.judge_style = *parsed;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kerag: knowledge-graph question answering pipeline"};
    app.require_subcommand(1);

    kerag::RunConfig config;
    std::string filter_mode, mode, judge_style;

    auto* ask = app.add_subcommand("ask", "Answer one question");
    std::string question, query_time;
    ask->add_option("question", question, "The question text")->required();
    ask->add_option("--query-time", query_time, "Query time (MM/DD/YYYY, HH:MM:SS TZ)");
    add_common_options(ask, config, filter_mode, mode, judge_style);

    auto* batch = app.add_subcommand("batch", "Answer a question file");
    std::string questions_path, answers_path;
    batch->add_option("questions", questions_path, "Question records (JSONL)")->required();
    batch->add_option("--answers-out", answers_path, "Answers output path");
    add_common_options(batch, config, filter_mode, mode, judge_style);

    auto* eval = app.add_subcommand("eval", "Judge an answers file against gold records");
    std::string eval_answers, gold_path;
    eval->add_option("answers", eval_answers, "Answers file (JSONL)")->required();
    eval->add_option("gold", gold_path, "Gold question records (JSONL)")->required();
    add_common_options(eval, config, filter_mode, mode, judge_style);

    auto* sft = app.add_subcommand("sft", "Generate a fine-tuning corpus");
    std::string training_path;
    sft->add_option("training", training_path, "Training question records (JSONL)")->required();
    add_common_options(sft, config, filter_mode, mode, judge_style);

    auto* ablate = app.add_subcommand("ablate", "Run ablation variants side by side");
    std::string ablate_questions;
    std::vector<std::string> variants;
    ablate->add_option("questions", ablate_questions, "Question records with gold (JSONL)")
        ->required();
    ablate->add_option("--variants", variants, "Variants: multihop, filter, cot")
        ->required()
        ->delimiter(',');
    add_common_options(ablate, config, filter_mode, mode, judge_style);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (!apply_enums(config, filter_mode, mode, judge_style)) return kExitUsage;

    try {
        if (ask->parsed()) return kerag::cmd_ask(config, question, query_time, std::cout);
        if (batch->parsed()) {
            auto lines = kerag::cmd_batch(config, questions_path, answers_path);
            size_t missing = 0;
            for (const auto& line : lines) missing += line.is_missing ? 1 : 0;
            std::cout << "answered " << lines.size() << " questions (" << missing
                      << " missing)\n";
            return kExitOk;
        }
        if (eval->parsed()) {
            auto report = kerag::cmd_eval(config, eval_answers, gold_path);
            std::cout << kerag::render_report_text(report);
            return kExitOk;
        }
        if (sft->parsed()) {
            auto stats = kerag::cmd_sft(config, training_path);
            std::cout << "emitted " << stats.total << " records (kept_cot " << stats.kept_cot
                      << ", gold_substituted " << stats.gold_substituted << ", skipped "
                      << stats.skipped << ", cot_proportion " << stats.cot_proportion << ")\n";
            return kExitOk;
        }
        if (ablate->parsed()) {
            auto rows = kerag::cmd_ablate(config, ablate_questions, variants);
            std::cout << kerag::render_ablation_text(rows);
            return kExitOk;
        }
    } catch (const kerag::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kerag::TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfra;
    } catch (const kerag::ScriptMissError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfra;
    } catch (const kerag::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfra;
    } catch (const kerag::RetrievalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfra;
    } catch (const kerag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfra;
    }
    return kExitUsage;
}
