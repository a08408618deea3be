#include "kerag/cli/commands.hpp"

#include "kerag/errors.hpp"
#include "kerag/kg/api_backend.hpp"
#include "kerag/kg/fixture.hpp"
#include "kerag/kg/sparql_backend.hpp"
#include "kerag/llm/http_provider.hpp"
#include "kerag/llm/scripted.hpp"
#include "kerag/util/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kerag {

namespace fs = std::filesystem;

void validate_config(const RunConfig& config) {
    if (config.backend_spec.empty()) throw ConfigError("a backend spec is required");
    if (config.max_hops < 1 || config.max_hops > 3)
        throw ConfigError("max_hops must be within [1, 3]");
    if (config.top_k < 1) throw ConfigError("top_k must be >= 1");
    if (config.line_budget < 1) throw ConfigError("line budget must be >= 1");
}

namespace {

bool is_url(const std::string& spec) {
    return spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

BackendPtr build_backend(const RunConfig& config) {
    const std::string& spec = config.backend_spec;
    if (is_url(spec)) {
        SparqlConfig sparql;
        sparql.endpoint = spec;
        sparql.ontology_path = config.sparql_ontology;
        sparql.entity_iri_prefix = config.entity_iri_prefix;
        sparql.predicate_iri_prefix = config.predicate_iri_prefix;
        return SparqlBackend::from_config(sparql);
    }
    if (!fs::exists(spec)) throw ConfigError("backend path does not exist: " + spec);
    if (has_suffix(spec, ".json")) return ApiBackend::load_registry(spec);
    return load_fixture(spec);
}

std::unique_ptr<Provider> build_provider(const RunConfig& config) {
    const std::string& spec = config.provider_spec;
    if (spec.rfind("scripted:", 0) == 0)
        return std::make_unique<ScriptedProvider>(ScriptedProvider::from_file(spec.substr(9)));
    if (spec == "http" || spec.empty()) {
        auto env = HttpProvider::config_from_env();
        if (env) return std::make_unique<HttpProvider>(*env);
        if (spec == "http")
            throw ConfigError("provider 'http' needs KERAG_ENDPOINT in the environment");
        throw ConfigError("no provider configured: pass --provider or set KERAG_ENDPOINT");
    }
    throw ConfigError("unknown provider spec '" + spec + "'");
}

void ensure_out_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

std::string out_path(const RunConfig& config, const std::string& name) {
    if (config.out_dir.empty()) return name;
    return (fs::path(config.out_dir) / name).string();
}

}  // namespace

RunEnv build_env(const RunConfig& config) {
    validate_config(config);
    RunEnv env;
    env.backend = build_backend(config);
    env.provider = build_provider(config);
    env.catalog =
        config.templates_dir.empty() ? default_catalog() : load_catalog(config.templates_dir);
    env.request_log = std::make_unique<RequestLog>();
    env.request_log_path = config.request_log_path;
    if (env.request_log_path.empty())
        if (const char* from_env = std::getenv("KERAG_REQUEST_LOG"))
            env.request_log_path = from_env;
    return env;
}

PipelineConfig pipeline_config(const RunConfig& config) {
    PipelineConfig pipeline;
    pipeline.planner.max_hops = config.max_hops;
    pipeline.planner.filter_mode = config.filter_mode;
    pipeline.planner.top_k = config.top_k;
    pipeline.planner.candidate_pairs = config.candidate_pairs;
    pipeline.planner.multi_entity = config.multi_entity;
    pipeline.summarize.strict_evidence = config.strict_evidence;
    pipeline.mode = config.mode;
    pipeline.line_budget = config.line_budget;
    return pipeline;
}

int cmd_ask(const RunConfig& config, const std::string& question, const std::string& query_time,
            std::ostream& out) {
    RunEnv env = build_env(config);
    ensure_out_dir(config.out_dir);
    ChatClient chat = env.chat();

    QuestionRecord record;
    record.id = "ask";
    record.query = question;
    record.query_time = query_time;

    AskOutcome outcome = answer_question(record, chat, *env.backend, pipeline_config(config));

    out << "answer: " << outcome.answer.text << "\n";
    out << "missing: " << (outcome.answer.is_missing ? "true" : "false") << "\n";
    if (outcome.plan)
        out << "plan: " << outcome.plan->summary() << "\n";
    else
        out << "plan: (none: " << outcome.failure_reason << ")\n";
    out << "triples: " << outcome.subgraph.triples.size() << "\n";

    if (config.trace) {
        out << "trace.extraction: " << outcome.trace.extraction_raw << "\n";
        for (size_t i = 0; i < outcome.trace.hops.size(); ++i) {
            const auto& hop = outcome.trace.hops[i];
            auto join = [](const std::vector<std::string>& names) {
                std::string s;
                for (const auto& n : names) {
                    if (!s.empty()) s += ",";
                    s += n;
                }
                return s;
            };
            out << "trace.hop" << (i + 1) << ": offered=[" << join(hop.offered) << "] kept=["
                << join(hop.kept) << "] dropped=[" << join(hop.dropped)
                << "] sufficient=" << (hop.sufficient ? "true" : "false") << "\n";
        }
        if (!outcome.answer.reasoning.empty())
            out << "trace.reasoning: " << outcome.answer.reasoning << "\n";
        for (const auto& error : outcome.fetch_errors)
            out << "trace.fetch_error: " << error.entity_id << ": " << error.message << "\n";
    }

    if (!config.out_dir.empty()) {
        std::ofstream dump(out_path(config, "subgraph.jsonl"));
        dump_subgraph(dump, outcome.subgraph);
    }
    if (!env.request_log_path.empty())
        env.request_log->write_jsonl(env.request_log_path);
    return 0;
}

std::vector<AnswerLine> cmd_batch(const RunConfig& config, const std::string& questions_path,
                                  const std::string& answers_path) {
    RunEnv env = build_env(config);
    ensure_out_dir(config.out_dir);
    ChatClient chat = env.chat();
    PipelineConfig pipeline = pipeline_config(config);

    std::vector<QuestionRecord> questions = read_question_records(questions_path);
    std::vector<AnswerLine> lines(questions.size());
    std::vector<std::exception_ptr> hard_errors(questions.size());

    int workers = config.workers > 0 ? config.workers : default_workers();
    parallel_for_indexed(questions.size(), workers, [&](size_t i) {
        auto start = std::chrono::steady_clock::now();
        AnswerLine line;
        line.id = questions[i].id;
        try {
            AskOutcome outcome =
                answer_question(questions[i], chat, *env.backend, pipeline);
            line.answer = outcome.answer.text;
            line.is_missing = outcome.answer.is_missing;
            line.plan_summary = outcome.plan ? outcome.plan->summary() : "";
            line.hops = outcome.plan ? outcome.plan->hops : 0;
            line.triples = static_cast<int>(outcome.subgraph.triples.size());
            line.reason = outcome.failure_reason;
        } catch (const ScriptMissError&) {
            hard_errors[i] = std::current_exception();  // never silently diverge
        } catch (const Error& e) {
            line.answer = "I don't know";
            line.is_missing = true;
            line.reason = e.what();
        }
        line.elapsed_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        lines[i] = std::move(line);
    });
    for (auto& error : hard_errors)
        if (error) std::rethrow_exception(error);

    std::string path = answers_path.empty() ? out_path(config, "answers.jsonl") : answers_path;
    write_answer_lines(path, lines);
    if (!env.request_log_path.empty())
        env.request_log->write_jsonl(env.request_log_path);
    return lines;
}

MetricsReport cmd_eval(const RunConfig& config, const std::string& answers_path,
                       const std::string& gold_path) {
    RunEnv env = build_env(config);
    ensure_out_dir(config.out_dir);
    ChatClient chat = env.chat();

    std::vector<AnswerLine> answers = read_answer_lines(answers_path);
    std::vector<QuestionRecord> gold_records = read_question_records(gold_path);
    std::map<std::string, const QuestionRecord*> gold_by_id;
    for (const auto& record : gold_records) gold_by_id[record.id] = &record;

    std::vector<std::string> missing_ids;
    for (const auto& answer : answers)
        if (!gold_by_id.count(answer.id)) missing_ids.push_back(answer.id);
    if (!missing_ids.empty()) {
        std::string joined;
        for (const auto& id : missing_ids) {
            if (!joined.empty()) joined += ", ";
            joined += id;
        }
        throw DataError("answer ids missing from gold file: " + joined);
    }
    for (const auto& answer : answers)
        if (gold_by_id.at(answer.id)->gold.empty())
            throw DataError("gold record '" + answer.id + "' has no gold answer to judge against");

    std::vector<Verdict> verdicts(answers.size());
    int workers = config.workers > 0 ? config.workers : default_workers();
    std::vector<std::exception_ptr> hard_errors(answers.size());
    parallel_for_indexed(answers.size(), workers, [&](size_t i) {
        const AnswerLine& answer = answers[i];
        const QuestionRecord& question = *gold_by_id.at(answer.id);
        Verdict verdict;
        verdict.question_id = answer.id;
        verdict.split = question.split;

        Answer as_answer;
        as_answer.text = answer.answer;
        as_answer.is_missing = answer.is_missing;
        try {
            if (classify(as_answer) == ClassifyOutcome::missing) {
                verdict.classification = Classification::missing;
                verdict.judge_score = -1;
            } else {
                int score =
                    judge(chat, question.query, question.gold, answer.answer, config.judge_style);
                verdict.judge_score = score;
                verdict.classification =
                    score == 1 ? Classification::accurate : Classification::hallucination;
            }
        } catch (...) {
            hard_errors[i] = std::current_exception();
        }
        verdicts[i] = std::move(verdict);
    });
    for (auto& error : hard_errors)
        if (error) std::rethrow_exception(error);

    MetricsReport report = aggregate(verdicts);

    {
        std::ofstream out(out_path(config, "verdicts.jsonl"));
        if (!out) throw IoError("cannot write verdicts file");
        write_verdicts(out, verdicts);
    }
    {
        std::ofstream out(out_path(config, "report.txt"));
        if (!out) throw IoError("cannot write report file");
        out << render_report_text(report);
    }
    {
        std::ofstream out(out_path(config, "report.jsonl"));
        if (!out) throw IoError("cannot write report records");
        write_report_records(out, report);
    }
    if (!env.request_log_path.empty()) env.request_log->write_jsonl(env.request_log_path);
    return report;
}

SftStats cmd_sft(const RunConfig& config, const std::string& training_path) {
    RunEnv env = build_env(config);
    ensure_out_dir(config.out_dir);
    ChatClient chat = env.chat();

    std::vector<QuestionRecord> questions = read_question_records(training_path);
    SftConfig sft;
    sft.pipeline = pipeline_config(config);
    sft.judge_style = config.judge_style;

    int workers = config.workers > 0 ? config.workers : default_workers();
    SftStats stats = build_sft_dataset(questions, chat, *env.backend, sft,
                                       out_path(config, "sft_corpus.jsonl"),
                                       out_path(config, "sft_stats.json"), workers);
    if (!env.request_log_path.empty()) env.request_log->write_jsonl(env.request_log_path);
    return stats;
}

namespace {

std::string variant_file_tag(const std::string& variant) {
    if (variant == "baseline") return "baseline";
    if (variant == "-multihop") return "no_multihop";
    if (variant == "-filter") return "no_filter";
    if (variant == "-CoT") return "no_cot";
    return variant;
}

}  // namespace

std::vector<AblationRow> cmd_ablate(const RunConfig& config, const std::string& questions_path,
                                    const std::vector<std::string>& variants) {
    if (variants.empty()) throw ConfigError("ablate needs at least one variant");

    std::vector<std::string> normalized{"baseline"};
    for (auto token : variants) {
        std::string lowered;
        for (char c : token) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        while (!lowered.empty() && lowered.front() == '-') lowered.erase(lowered.begin());
        if (lowered == "multihop")
            normalized.push_back("-multihop");
        else if (lowered == "filter")
            normalized.push_back("-filter");
        else if (lowered == "cot")
            normalized.push_back("-CoT");
        else
            throw ConfigError("unknown ablation variant '" + token +
                              "' (expected multihop, filter, or cot)");
    }

    std::vector<AblationRow> rows;
    for (const auto& variant : normalized) {
        RunConfig variant_config = config;
        if (variant == "-multihop") variant_config.max_hops = 1;
        if (variant == "-filter") variant_config.filter_mode = FilterMode::none;
        if (variant == "-CoT") variant_config.mode = SummarizeMode::plain;

        std::string tag = variant_file_tag(variant);
        std::string answers_path = out_path(config, "answers_" + tag + ".jsonl");
        std::vector<AnswerLine> answers =
            cmd_batch(variant_config, questions_path, answers_path);

        RunConfig eval_config = variant_config;
        eval_config.out_dir = config.out_dir;
        // Per-variant artifact names so runs don't clobber each other.
        MetricsReport report;
        {
            RunEnv env = build_env(eval_config);
            ChatClient chat = env.chat();
            std::vector<QuestionRecord> gold_records = read_question_records(questions_path);
            std::map<std::string, const QuestionRecord*> gold_by_id;
            for (const auto& record : gold_records) gold_by_id[record.id] = &record;

            std::vector<Verdict> verdicts;
            for (const auto& answer : answers) {
                auto it = gold_by_id.find(answer.id);
                if (it == gold_by_id.end())
                    throw DataError("ablation answer id missing from questions: " + answer.id);
                const QuestionRecord& question = *it->second;
                Verdict verdict;
                verdict.question_id = answer.id;
                verdict.split = question.split;
                Answer as_answer;
                as_answer.text = answer.answer;
                as_answer.is_missing = answer.is_missing;
                if (classify(as_answer) == ClassifyOutcome::missing) {
                    verdict.classification = Classification::missing;
                    verdict.judge_score = -1;
                } else {
                    int score = judge(chat, question.query, question.gold, answer.answer,
                                      config.judge_style);
                    verdict.judge_score = score;
                    verdict.classification =
                        score == 1 ? Classification::accurate : Classification::hallucination;
                }
                verdicts.push_back(std::move(verdict));
            }
            report = aggregate(verdicts);
            std::ofstream out(out_path(config, "verdicts_" + tag + ".jsonl"));
            write_verdicts(out, verdicts);
        }

        AblationRow row;
        row.variant = variant;
        row.report = report;
        for (const auto& answer : answers) row.total_triples += answer.triples;
        rows.push_back(std::move(row));
    }

    {
        std::ofstream out(out_path(config, "ablation.txt"));
        if (!out) throw IoError("cannot write ablation report");
        out << render_ablation_text(rows);
    }
    {
        std::ofstream out(out_path(config, "ablation.jsonl"));
        for (const auto& row : rows) {
            nlohmann::ordered_json rec = {
                {"variant", row.variant},
                {"accuracy", row.report.overall.accuracy},
                {"hallucination", row.report.overall.hallucination},
                {"missing", row.report.overall.missing},
                {"truthfulness", row.report.overall.truthfulness()},
                {"n", row.report.overall.n},
                {"total_triples", row.total_triples}};
            out << rec.dump() << '\n';
        }
    }
    return rows;
}

std::string render_ablation_text(const std::vector<AblationRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "Variant" << std::right << std::setw(8) << "Accu."
        << std::setw(8) << "Hall." << std::setw(8) << "Miss." << std::setw(8) << "Truth."
        << std::setw(10) << "Triples" << "\n";
    for (const auto& row : rows) {
        out << std::left << std::setw(12) << row.variant << std::right << std::fixed
            << std::setprecision(3) << std::setw(8) << row.report.overall.accuracy << std::setw(8)
            << row.report.overall.hallucination << std::setw(8) << row.report.overall.missing
            << std::setw(8) << row.report.overall.truthfulness() << std::setw(10)
            << row.total_triples << "\n";
    }
    return out.str();
}

}  // namespace kerag
