#include "kerag/planner/trigram.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace kerag {

namespace {

constexpr char kPadStart = '\x02';
constexpr char kPadEnd = '\x03';

std::set<std::string> trigram_set(std::string_view normalized) {
    std::string padded;
    padded.reserve(normalized.size() + 4);
    padded += kPadStart;
    padded += kPadStart;
    padded += normalized;
    padded += kPadEnd;
    padded += kPadEnd;
    std::set<std::string> grams;
    for (size_t i = 0; i + 3 <= padded.size(); ++i) grams.insert(padded.substr(i, 3));
    return grams;
}

}  // namespace

std::string trigram_normalize(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (c == '_') c = ' ';
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

double trigram_similarity(std::string_view a, std::string_view b) {
    auto ga = trigram_set(trigram_normalize(a));
    auto gb = trigram_set(trigram_normalize(b));
    size_t intersection = 0;
    for (const auto& g : ga) intersection += gb.count(g);
    size_t unions = ga.size() + gb.size() - intersection;
    if (unions == 0) return 1.0;
    return static_cast<double>(intersection) / static_cast<double>(unions);
}

std::vector<CandidatePair> ngram_candidate_pairs(std::string_view question,
                                                 const std::vector<std::string>& entity_names,
                                                 const std::vector<std::string>& predicate_names,
                                                 int k) {
    if (question.empty() || k <= 0 || entity_names.empty() || predicate_names.empty()) return {};

    auto question_grams = trigram_set(trigram_normalize(question));
    auto sim_to_question = [&](const std::string& name) {
        auto grams = trigram_set(trigram_normalize(name));
        size_t intersection = 0;
        for (const auto& g : grams) intersection += question_grams.count(g);
        size_t unions = grams.size() + question_grams.size() - intersection;
        return unions == 0 ? 1.0 : static_cast<double>(intersection) / static_cast<double>(unions);
    };

    std::vector<std::pair<std::string, double>> entity_scores;
    entity_scores.reserve(entity_names.size());
    for (const auto& e : entity_names) entity_scores.emplace_back(e, sim_to_question(e));
    std::vector<std::pair<std::string, double>> predicate_scores;
    predicate_scores.reserve(predicate_names.size());
    for (const auto& p : predicate_names) predicate_scores.emplace_back(p, sim_to_question(p));

    std::vector<CandidatePair> pairs;
    pairs.reserve(entity_scores.size() * predicate_scores.size());
    for (const auto& [e, se] : entity_scores)
        for (const auto& [p, sp] : predicate_scores)
            pairs.push_back({e, p, (se + sp) / 2.0});

    std::sort(pairs.begin(), pairs.end(), [](const CandidatePair& a, const CandidatePair& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.entity != b.entity) return a.entity < b.entity;
        return a.predicate < b.predicate;
    });
    if (pairs.size() > static_cast<size_t>(k)) pairs.resize(static_cast<size_t>(k));
    return pairs;
}

}  // namespace kerag
