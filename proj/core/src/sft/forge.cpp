#include "kerag/sft/forge.hpp"

#include "kerag/errors.hpp"
#include "kerag/util/parallel.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace kerag {

std::string to_string(SftBranch branch) {
    return branch == SftBranch::kept_cot ? "kept_cot" : "gold_substituted";
}

SftGenOutcome generate_sft_record(const ChatClient& chat, const QuestionRecord& question,
                                  const LinearizedEvidence& evidence, const std::string& gold,
                                  const SftConfig& config) {
    if (gold.empty()) throw DataError("sft question '" + question.id + "' has no gold answer");

    Answer generated = summarize(chat, question.query, evidence, question.query_time,
                                 SummarizeMode::cot, config.pipeline.summarize);
    if (generated.infra_failure)
        return {std::nullopt, "generation failed for '" + question.id + "': provider transport"};

    int score = 0;
    if (classify(generated) == ClassifyOutcome::needs_judge)
        score = judge(chat, question.query, gold, generated.text, config.judge_style,
                      config.judge_template);
    // Missing-style generations score 0 and fall to the gold branch.

    SftRecord record;
    record.question_id = question.id;
    record.question = question.query;
    record.query_time = question.query_time;
    record.evidence_lines = evidence.lines;
    record.judge_score = score;

    Bindings bindings{{"QUESTION", question.query},
                      {"CONTENT", evidence.joined()},
                      {"QUERY_TIME", question.query_time}};
    if (score == 1) {
        record.branch = SftBranch::kept_cot;
        record.prompt_kind = SummarizeMode::cot;
        record.prompt_text = render(chat.catalog().get("summarize.cot"), bindings);
        record.target = generated.reasoning;
    } else {
        record.branch = SftBranch::gold_substituted;
        record.prompt_kind = SummarizeMode::plain;
        record.prompt_text = render(chat.catalog().get("summarize.plain"), bindings);
        record.target = gold;
    }
    return {std::move(record), ""};
}

SftStats build_sft_dataset(const std::vector<QuestionRecord>& questions, const ChatClient& chat,
                           const KgBackend& backend, const SftConfig& config,
                           const std::string& corpus_path, const std::string& stats_path,
                           int workers) {
    for (const auto& q : questions)
        if (q.gold.empty())
            throw DataError("sft training question '" + q.id + "' has no gold answer");

    struct Slot {
        SftGenOutcome outcome;
        std::exception_ptr error;
    };
    std::vector<Slot> slots(questions.size());

    PipelineConfig pipeline = config.pipeline;
    pipeline.mode = SummarizeMode::cot;

    parallel_for_indexed(questions.size(), workers, [&](size_t i) {
        try {
            AskOutcome asked = answer_question(questions[i], chat, backend, pipeline);
            slots[i].outcome =
                generate_sft_record(chat, questions[i], asked.evidence, questions[i].gold, config);
        } catch (...) {
            slots[i].error = std::current_exception();
        }
    });
    for (auto& slot : slots)
        if (slot.error) std::rethrow_exception(slot.error);

    SftStats stats;
    std::string tmp_path = corpus_path + ".tmp";
    try {
        std::ofstream out(tmp_path);
        if (!out) throw IoError("cannot open corpus file for writing: " + tmp_path);
        for (const auto& slot : slots) {
            if (!slot.outcome.record) {
                ++stats.skipped;
                continue;
            }
            const SftRecord& record = *slot.outcome.record;
            nlohmann::ordered_json rec = {{"prompt", record.prompt_text},
                                          {"completion", record.target},
                                          {"branch", to_string(record.branch)},
                                          {"question_id", record.question_id}};
            out << rec.dump() << '\n';
            ++stats.total;
            if (record.branch == SftBranch::kept_cot)
                ++stats.kept_cot;
            else
                ++stats.gold_substituted;
        }
        if (!out.good()) throw IoError("write failure on corpus file: " + tmp_path);
        out.close();
        if (std::rename(tmp_path.c_str(), corpus_path.c_str()) != 0)
            throw IoError("cannot move corpus file into place: " + corpus_path);
    } catch (...) {
        std::remove(tmp_path.c_str());
        throw;
    }

    stats.proportion_defined = stats.total > 0;
    stats.cot_proportion =
        stats.proportion_defined ? static_cast<double>(stats.kept_cot) / stats.total : 0.0;

    if (!stats_path.empty()) {
        std::ofstream out(stats_path);
        if (!out) throw IoError("cannot open stats file for writing: " + stats_path);
        nlohmann::ordered_json rec = {{"total", stats.total},
                                      {"kept_cot", stats.kept_cot},
                                      {"gold_substituted", stats.gold_substituted},
                                      {"skipped", stats.skipped},
                                      {"cot_proportion", stats.cot_proportion},
                                      {"proportion_defined", stats.proportion_defined}};
        out << rec.dump(2) << '\n';
    }
    return stats;
}

}  // namespace kerag
