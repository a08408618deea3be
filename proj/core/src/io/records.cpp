#include "kerag/io/records.hpp"

#include "kerag/errors.hpp"
#include "kerag/kg/types.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace kerag {

std::vector<QuestionRecord> read_question_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open question file: " + path);

    std::vector<QuestionRecord> records;
    std::set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw FormatError(path, line_no, "question record is not a JSON object");

        QuestionRecord rec;
        try {
            rec.id = obj.value("id", "");
            rec.query = obj.value("query", "");
            rec.query_time = obj.value("query_time", "");
            rec.gold = obj.value("gold", "");
            rec.split = obj.value("split", "");
            rec.domain_hint = obj.value("domain_hint", "");
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path, line_no, std::string("bad field type: ") + e.what());
        }

        if (rec.id.empty()) throw DataError(path + ":" + std::to_string(line_no) + ": missing id");
        if (!seen_ids.insert(rec.id).second)
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate id '" + rec.id +
                            "'");
        if (rec.query.empty())
            throw DataError(path + ":" + std::to_string(line_no) + ": missing query");
        if (!rec.query_time.empty() && !crag_date_part(rec.query_time))
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": query_time is not parseable: " + rec.query_time);
        if (!rec.split.empty() && rec.split != "head" && rec.split != "torso" &&
            rec.split != "tail")
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown split '" +
                            rec.split + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

void write_answer_lines(const std::string& path, const std::vector<AnswerLine>& lines) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open answer file for writing: " + path);
    for (const auto& a : lines) {
        nlohmann::ordered_json rec = {{"id", a.id},
                                      {"answer", a.answer},
                                      {"is_missing", a.is_missing},
                                      {"plan", a.plan_summary},
                                      {"hops", a.hops},
                                      {"triples", a.triples}};
        if (!a.reason.empty()) rec["reason"] = a.reason;
        rec["elapsed_ms"] = a.elapsed_ms;
        out << rec.dump() << '\n';
    }
}

std::vector<AnswerLine> read_answer_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open answer file: " + path);
    std::vector<AnswerLine> lines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw FormatError(path, line_no, "answer record is not a JSON object");
        AnswerLine a;
        try {
            a.id = obj.value("id", "");
            a.answer = obj.value("answer", "");
            a.is_missing = obj.value("is_missing", false);
            a.plan_summary = obj.value("plan", "");
            a.hops = obj.value("hops", 0);
            a.triples = obj.value("triples", 0);
            a.reason = obj.value("reason", "");
            a.elapsed_ms = obj.value("elapsed_ms", 0.0);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path, line_no, std::string("bad field type: ") + e.what());
        }
        if (a.id.empty()) throw DataError(path + ":" + std::to_string(line_no) + ": missing id");
        lines.push_back(std::move(a));
    }
    return lines;
}

}  // namespace kerag
