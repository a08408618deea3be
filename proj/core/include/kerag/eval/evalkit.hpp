#pragma once
#include "kerag/llm/provider.hpp"
#include "kerag/summarizer/summarizer.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kerag {

enum class Classification { accurate, missing, hallucination };
std::string to_string(Classification c);

enum class ClassifyOutcome { missing, needs_judge };

// Missing is decided by pattern before any judge call.
ClassifyOutcome classify(const Answer& answer);

enum class JudgeStyle { crag, head2tail };
std::optional<JudgeStyle> judge_style_from(std::string_view token);

// Renders the style's grading prompt and parses the verdict: crag parses a
// {"score": 0|1} blob, head2tail parses Yes/No. Unparseable critic output
// after one retry scores 0.
int judge(const ChatClient& chat, const std::string& question, const std::string& gold,
          const std::string& prediction, JudgeStyle style,
          const std::string& template_override = "");

struct Verdict {
    std::string question_id;
    Classification classification = Classification::missing;
    int judge_score = -1;  // -1 = n/a (judge not invoked)
    std::string split;     // head|torso|tail|"" (unsplit)
};

struct MetricsGroup {
    double accuracy = 0.0;
    double hallucination = 0.0;
    double missing = 0.0;
    int n = 0;

    double truthfulness() const { return accuracy - hallucination; }
};

// Per-split groups plus overall. Splits with n = 0 are omitted.
struct MetricsReport {
    std::map<std::string, MetricsGroup> splits;
    MetricsGroup overall;
};

MetricsReport aggregate(std::span<const Verdict> verdicts);

// Text table in the Accu./Hall./Miss./Truth. column order.
std::string render_report_text(const MetricsReport& report, const std::string& title = "");
// Machine-readable line records, one group per line.
void write_report_records(std::ostream& out, const MetricsReport& report,
                          const std::string& run_label = "");

void write_verdicts(std::ostream& out, std::span<const Verdict> verdicts);

}  // namespace kerag
