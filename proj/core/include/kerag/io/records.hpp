#pragma once
#include <optional>
#include <string>
#include <vector>

namespace kerag {

// One question of a batch/eval/sft input file.
struct QuestionRecord {
    std::string id;
    std::string query;
    std::string query_time;
    std::string gold;         // optional
    std::string split;        // head|torso|tail or empty (unsplit)
    std::string domain_hint;  // optional
};

// JSONL, one object per line: {"id", "query", "query_time"?, "gold"?,
// "split"?, "domain_hint"?}. ids must be unique; query_time must parse
// when present.
std::vector<QuestionRecord> read_question_records(const std::string& path);

struct AnswerLine {
    std::string id;
    std::string answer;
    bool is_missing = false;
    std::string plan_summary;
    int hops = 0;
    int triples = 0;
    std::string reason;  // failure note for missing-by-error answers
    double elapsed_ms = 0.0;
};

void write_answer_lines(const std::string& path, const std::vector<AnswerLine>& lines);
std::vector<AnswerLine> read_answer_lines(const std::string& path);

}  // namespace kerag
