#pragma once
#include "kerag/eval/evalkit.hpp"
#include "kerag/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kerag {

enum class SftBranch { kept_cot, gold_substituted };
std::string to_string(SftBranch branch);

// One training example: either the generated reasoning kept as the target
// (judge scored it correct) or the gold answer behind a plain prompt.
struct SftRecord {
    std::string question_id;
    std::string question;
    std::string query_time;
    std::vector<std::string> evidence_lines;
    SummarizeMode prompt_kind = SummarizeMode::cot;
    std::string prompt_text;  // rendered prompt
    std::string target;
    SftBranch branch = SftBranch::kept_cot;
    int judge_score = 0;
};

struct SftStats {
    int total = 0;  // emitted records
    int kept_cot = 0;
    int gold_substituted = 0;
    int skipped = 0;
    double cot_proportion = 0.0;
    bool proportion_defined = true;  // false when total == 0
};

struct SftConfig {
    PipelineConfig pipeline;
    JudgeStyle judge_style = JudgeStyle::crag;
    std::string judge_template;  // empty → the style's default
};

struct SftGenOutcome {
    std::optional<SftRecord> record;
    std::string skip_reason;  // set when generation infra-failed
};

// CoT-generate, judge against gold, branch. Infrastructure failures skip
// the record rather than substituting gold.
SftGenOutcome generate_sft_record(const ChatClient& chat, const QuestionRecord& question,
                                  const LinearizedEvidence& evidence, const std::string& gold,
                                  const SftConfig& config);

// Runs the retrieval pipeline per training question, generates records,
// and writes the corpus (JSONL: prompt, completion, branch, question_id)
// plus a stats summary. Questions run on a worker pool; output keeps input
// order. I/O failure aborts and removes the partial file.
SftStats build_sft_dataset(const std::vector<QuestionRecord>& questions, const ChatClient& chat,
                           const KgBackend& backend, const SftConfig& config,
                           const std::string& corpus_path, const std::string& stats_path,
                           int workers = 1);

}  // namespace kerag
