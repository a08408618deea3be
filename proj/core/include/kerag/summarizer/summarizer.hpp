#pragma once
#include "kerag/llm/provider.hpp"
#include "kerag/retriever/retriever.hpp"

#include <string>

namespace kerag {

enum class SummarizeMode { cot, plain };

std::string to_string(SummarizeMode mode);
std::optional<SummarizeMode> summarize_mode_from(std::string_view token);

struct Answer {
    std::string text;
    bool is_missing = false;
    std::string reasoning;  // full CoT completion in cot mode
    SummarizeMode mode = SummarizeMode::cot;
    bool infra_failure = false;   // missing because the provider failed, not the model
    bool provider_called = true;  // false for the strict empty-evidence short-circuit
};

struct SummarizeConfig {
    // Answer missing without an LLM call when the evidence is empty.
    bool strict_evidence = true;
};

// Missing-answer text patterns, case-insensitive: exact "i don't know",
// prefix "i'm sorry i can't find", empty text.
bool matches_missing_pattern(std::string_view text);

// Text after the last line-initial "Answer:" marker, else the last
// non-empty line.
std::string extract_final(const std::string& cot_completion);

Answer summarize(const ChatClient& chat, const std::string& question,
                 const LinearizedEvidence& evidence, const std::string& query_time,
                 SummarizeMode mode, const SummarizeConfig& config = {});

}  // namespace kerag
