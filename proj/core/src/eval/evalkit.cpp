#include "kerag/eval/evalkit.hpp"

#include "kerag/errors.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kerag {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::accurate: return "accurate";
        case Classification::missing: return "missing";
        case Classification::hallucination: return "hallucination";
    }
    return "missing";
}

ClassifyOutcome classify(const Answer& answer) {
    if (answer.is_missing || matches_missing_pattern(answer.text))
        return ClassifyOutcome::missing;
    return ClassifyOutcome::needs_judge;
}

std::optional<JudgeStyle> judge_style_from(std::string_view token) {
    if (token == "crag") return JudgeStyle::crag;
    if (token == "head2tail") return JudgeStyle::head2tail;
    return std::nullopt;
}

namespace {

// First balanced {...} blob containing a "score" field.
std::optional<int> parse_crag_score(const std::string& text) {
    size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string::npos) {
        int depth = 0;
        bool in_string = false;
        size_t end = std::string::npos;
        for (size_t i = pos; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                if (--depth == 0) {
                    end = i;
                    break;
                }
            }
        }
        if (end == std::string::npos) return std::nullopt;
        auto obj = nlohmann::json::parse(text.substr(pos, end - pos + 1), nullptr, false);
        if (!obj.is_discarded() && obj.is_object() && obj.contains("score")) {
            const auto& score = obj["score"];
            if (score.is_number_integer()) {
                int v = score.get<int>();
                if (v == 0 || v == 1) return v;
            } else if (score.is_string()) {
                if (score == "0") return 0;
                if (score == "1") return 1;
            }
            return std::nullopt;
        }
        pos = end + 1;
    }
    return std::nullopt;
}

// First standalone yes/no token, case-insensitive.
std::optional<int> parse_yes_no(const std::string& text) {
    std::string lower;
    lower.reserve(text.size());
    for (unsigned char c : text) lower += static_cast<char>(std::tolower(c));
    auto standalone = [&](const std::string& word) -> size_t {
        size_t pos = 0;
        while ((pos = lower.find(word, pos)) != std::string::npos) {
            bool left_ok = pos == 0 || !std::isalpha(static_cast<unsigned char>(lower[pos - 1]));
            size_t after = pos + word.size();
            bool right_ok =
                after >= lower.size() || !std::isalpha(static_cast<unsigned char>(lower[after]));
            if (left_ok && right_ok) return pos;
            pos = after;
        }
        return std::string::npos;
    };
    size_t yes = standalone("yes");
    size_t no = standalone("no");
    if (yes == std::string::npos && no == std::string::npos) return std::nullopt;
    if (yes == std::string::npos) return 0;
    if (no == std::string::npos) return 1;
    return yes < no ? 1 : 0;
}

}  // namespace

int judge(const ChatClient& chat, const std::string& question, const std::string& gold,
          const std::string& prediction, JudgeStyle style, const std::string& template_override) {
    std::string template_id = !template_override.empty()
                                  ? template_override
                                  : (style == JudgeStyle::crag ? "judge.crag" : "judge.head2tail");
    ChatRequest request{template_id,
                        {{"QUESTION", question},
                         {"GROUND_TRUTH", gold},
                         {"PREDICTION", prediction}}};

    auto parse = [&](const std::string& text) -> std::optional<int> {
        return style == JudgeStyle::crag ? parse_crag_score(text) : parse_yes_no(text);
    };

    // Critic failures never inflate accuracy: unparseable output after one
    // retry scores 0, and so does a transport failure.
    try {
        ChatResponse response = chat.complete(request);
        auto score = parse(response.text);
        if (!score) {
            response = chat.complete(request);  // one retry
            score = parse(response.text);
        }
        return score.value_or(0);
    } catch (const TransportError&) {
        return 0;
    }
}

MetricsReport aggregate(std::span<const Verdict> verdicts) {
    struct Counts {
        int accurate = 0, missing = 0, hallucination = 0;
        int n() const { return accurate + missing + hallucination; }
    };
    std::map<std::string, Counts> split_counts;
    Counts overall;

    for (const auto& v : verdicts) {
        auto bump = [&](Counts& c) {
            switch (v.classification) {
                case Classification::accurate: ++c.accurate; break;
                case Classification::missing: ++c.missing; break;
                case Classification::hallucination: ++c.hallucination; break;
            }
        };
        bump(overall);
        if (!v.split.empty()) bump(split_counts[v.split]);
    }

    auto to_group = [](const Counts& c) {
        MetricsGroup g;
        g.n = c.n();
        if (g.n > 0) {
            g.accuracy = static_cast<double>(c.accurate) / g.n;
            g.hallucination = static_cast<double>(c.hallucination) / g.n;
            g.missing = static_cast<double>(c.missing) / g.n;
        }
        return g;
    };

    MetricsReport report;
    report.overall = to_group(overall);
    for (const auto& [split, counts] : split_counts)
        if (counts.n() > 0) report.splits[split] = to_group(counts);
    return report;
}

namespace {

void render_row(std::ostream& out, const std::string& label, const MetricsGroup& g) {
    out << std::left << std::setw(12) << label << std::right << std::fixed
        << std::setprecision(3) << std::setw(8) << g.accuracy << std::setw(8) << g.hallucination
        << std::setw(8) << g.missing << std::setw(8) << g.truthfulness() << std::setw(8) << g.n
        << "\n";
}

}  // namespace

std::string render_report_text(const MetricsReport& report, const std::string& title) {
    std::ostringstream out;
    if (!title.empty()) out << title << "\n";
    out << std::left << std::setw(12) << "Split" << std::right << std::setw(8) << "Accu."
        << std::setw(8) << "Hall." << std::setw(8) << "Miss." << std::setw(8) << "Truth."
        << std::setw(8) << "n" << "\n";
    static const char* kOrder[] = {"head", "torso", "tail"};
    for (const char* split : kOrder) {
        auto it = report.splits.find(split);
        if (it != report.splits.end()) render_row(out, split, it->second);
    }
    for (const auto& [split, group] : report.splits) {
        bool ordered = std::any_of(std::begin(kOrder), std::end(kOrder),
                                   [&](const char* s) { return split == s; });
        if (!ordered) render_row(out, split, group);
    }
    render_row(out, "overall", report.overall);
    return out.str();
}

void write_report_records(std::ostream& out, const MetricsReport& report,
                          const std::string& run_label) {
    auto write_group = [&](const std::string& split, const MetricsGroup& g) {
        nlohmann::ordered_json rec = {{"split", split},
                                      {"n", g.n},
                                      {"accuracy", g.accuracy},
                                      {"hallucination", g.hallucination},
                                      {"missing", g.missing},
                                      {"truthfulness", g.truthfulness()}};
        if (!run_label.empty()) rec["run"] = run_label;
        out << rec.dump() << '\n';
    };
    for (const auto& [split, group] : report.splits) write_group(split, group);
    write_group("overall", report.overall);
}

void write_verdicts(std::ostream& out, std::span<const Verdict> verdicts) {
    for (const auto& v : verdicts) {
        nlohmann::ordered_json rec = {
            {"id", v.question_id},
            {"classification", to_string(v.classification)},
            {"judge_score", v.judge_score < 0 ? nlohmann::ordered_json(nullptr)
                                              : nlohmann::ordered_json(v.judge_score)},
            {"split", v.split.empty() ? "unsplit" : v.split}};
        out << rec.dump() << '\n';
    }
}

}  // namespace kerag
