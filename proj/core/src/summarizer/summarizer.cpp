#include "kerag/summarizer/summarizer.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <cctype>

namespace kerag {

std::string to_string(SummarizeMode mode) {
    return mode == SummarizeMode::cot ? "cot" : "plain";
}

std::optional<SummarizeMode> summarize_mode_from(std::string_view token) {
    if (token == "cot") return SummarizeMode::cot;
    if (token == "plain") return SummarizeMode::plain;
    return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

bool matches_missing_pattern(std::string_view text) {
    std::string t = lowercase(trim(text));
    if (t.empty()) return true;
    if (t == "i don't know") return true;
    if (t.rfind("i'm sorry i can't find", 0) == 0) return true;
    return false;
}

std::string extract_final(const std::string& cot_completion) {
    // Last line starting with "Answer:".
    size_t marker = std::string::npos;
    size_t line_start = 0;
    for (size_t i = 0; i <= cot_completion.size(); ++i) {
        if (i == cot_completion.size() || cot_completion[i] == '\n') {
            std::string_view line(cot_completion.data() + line_start, i - line_start);
            size_t content = line.find_first_not_of(" \t");
            if (content != std::string_view::npos &&
                line.substr(content).rfind("Answer:", 0) == 0)
                marker = line_start + content + 7;
            line_start = i + 1;
        }
    }
    if (marker != std::string::npos) return trim(cot_completion.substr(marker));

    // Fallback: last non-empty line.
    size_t end = cot_completion.find_last_not_of(" \t\r\n");
    if (end == std::string::npos) return {};
    size_t start = cot_completion.rfind('\n', end);
    start = start == std::string::npos ? 0 : start + 1;
    return trim(cot_completion.substr(start, end - start + 1));
}

Answer summarize(const ChatClient& chat, const std::string& question,
                 const LinearizedEvidence& evidence, const std::string& query_time,
                 SummarizeMode mode, const SummarizeConfig& config) {
    Answer answer;
    answer.mode = mode;

    if (config.strict_evidence && evidence.lines.empty()) {
        answer.is_missing = true;
        answer.text = "I don't know";
        answer.provider_called = false;
        return answer;
    }

    ChatRequest request{mode == SummarizeMode::cot ? "summarize.cot" : "summarize.plain",
                        {{"QUESTION", question},
                         {"CONTENT", evidence.joined()},
                         {"QUERY_TIME", query_time}}};
    ChatResponse response;
    try {
        response = chat.complete(request);
    } catch (const TransportError&) {
        answer.is_missing = true;
        answer.infra_failure = true;
        answer.text = "";
        return answer;
    }

    if (mode == SummarizeMode::cot) {
        answer.reasoning = response.text;
        answer.text = extract_final(response.text);
    } else {
        answer.text = trim(response.text);
    }
    answer.is_missing = matches_missing_pattern(answer.text);
    return answer;
}

}  // namespace kerag
