#include "support/test_support.hpp"

#include "kerag/planner/planner.hpp"
#include "kerag/planner/trigram.hpp"
#include "kerag/util/hash.hpp"

#include <doctest.h>

#include <atomic>
#include <random>
#include <sstream>

using namespace kerag;
using namespace kerag::test;

namespace {

const std::string kPattyQuestion =
    "Which of Patty Ross's film has achieved the highest box office success globally?";
const std::string kQueryTime = "03/05/2024, 10:00:00 PT";

struct PlannerRig {
    std::shared_ptr<MemoryBackend> backend;
    FnProvider provider;
    ChatClient chat;
    Planner planner;

    PlannerRig(std::shared_ptr<MemoryBackend> b, FnProvider::Fn fn, PlannerConfig config = {})
        : backend(std::move(b)),
          provider(std::move(fn)),
          chat(default_catalog(), provider),
          planner(chat, *backend, config) {}
};

}  // namespace

TEST_CASE("topic and domain extraction resolves typed entities") {
    PlannerRig rig(movie_backend(), desk_router);
    auto extraction = rig.planner.extract_topic_and_domain(kPattyQuestion, kQueryTime);
    CHECK(extraction.domain == "movie");
    REQUIRE(extraction.topic_entities.size() == 1);
    CHECK(extraction.topic_entities[0].id == "Patty Ross");
    CHECK(extraction.topic_entities[0].entity_type == "person");
}

TEST_CASE("finance extraction lands on the finance domain") {
    PlannerRig rig(finance_backend(), desk_router);
    auto extraction = rig.planner.extract_topic_and_domain(
        "what was the volume of trades for rcm on the last day?", kQueryTime);
    CHECK(extraction.domain == "finance");
    REQUIRE(extraction.topic_entities.size() == 1);
    CHECK(extraction.topic_entities[0].id == "RCM");  // resolved via case folding
}

TEST_CASE("unknown domains fall back to other with the model's entity") {
    // Ontologies with several domains keep "other" as-is.
    std::istringstream in(
        "REL\tmovie\tperson\tacted_movies\tentity:movie\tMovies the person acted in.\n"
        "REL\tsports\tteam\twins\tattr:number\tSeason win count.\n");
    auto backend = parse_fixture(in, "two_domain.kg");
    FnProvider provider(desk_router);
    ChatClient chat(default_catalog(), provider);
    Planner planner(chat, *backend, {});
    auto extraction =
        planner.extract_topic_and_domain("What is the national dish of Freedonia?", kQueryTime);
    CHECK(extraction.domain == "other");
    REQUIRE(extraction.topic_entities.size() == 1);
    CHECK(extraction.topic_entities[0].id == "Unknown Thing");
    CHECK(extraction.topic_entities[0].entity_type == kUntypedEntity);
}

TEST_CASE("unparseable extraction output re-prompts once then fails") {
    std::atomic<int> calls{0};
    PlannerRig rig(movie_backend(), [&](const RenderedPrompt&, const ChatRequest&) {
        ++calls;
        return std::string("no json here");
    });
    CHECK_THROWS_AS(rig.planner.extract_topic_and_domain(kPattyQuestion, kQueryTime),
                    PlanningError);
    CHECK(calls.load() == 2);
}

TEST_CASE("multi-entity extraction returns the full list") {
    PlannerConfig config;
    config.multi_entity = true;
    PlannerRig rig(
        movie_backend(),
        [](const RenderedPrompt& prompt, const ChatRequest&) -> std::string {
            if (prompt.template_id == "planning.entity_domain")
                return R"({"domain": "movie", "entities": ["Patty Ross", "Gene Park"]})";
            return "<NO>";
        },
        config);
    auto extraction = rig.planner.extract_topic_and_domain(
        "Who is older, Patty Ross or Gene Park?", kQueryTime);
    REQUIRE(extraction.topic_entities.size() == 2);
    CHECK(extraction.topic_entities[0].id == "Patty Ross");
    CHECK(extraction.topic_entities[1].id == "Gene Park");
}

TEST_CASE("time frame extraction parses points, ranges, and open-ended frames") {
    auto scripted_time = [](const std::string& completion) {
        return [completion](const RenderedPrompt& prompt, const ChatRequest&) -> std::string {
            REQUIRE(prompt.template_id == "planning.time_cot");
            return completion;
        };
    };

    SUBCASE("relative day resolves to a point") {
        PlannerRig rig(movie_backend(),
                       scripted_time("Since the query is asking about the last day of the Query "
                                     "Time, the time frame should be <02/27/2024>."));
        auto frame = rig.planner.extract_time_frame(
            "what was the volume of trades for rcm on the last day?", "02/28/2024, 08:04:08 PT");
        CHECK(frame.is_point());
        CHECK(frame.start == "02/27/2024");
        CHECK(!frame.defaulted_warning);
    }
    SUBCASE("past week resolves to a range") {
        PlannerRig rig(movie_backend(),
                       scripted_time("The time frame should be <02/21/2024 ~ 02/28/2024>."));
        auto frame = rig.planner.extract_time_frame(
            "on average, what was the daily high stock price of xpev over the past week?",
            "02/28/2024, 08:17:40 PT");
        CHECK(frame.start == "02/21/2024");
        CHECK(frame.end == "02/28/2024");
        CHECK(!frame.open_ended);
    }
    SUBCASE("no cue defaults to the query time") {
        PlannerRig rig(movie_backend(),
                       scripted_time("The time frame should be <02/28/2024>. Since there is no "
                                     "datetime explicitly mentioned and we take the Query Time "
                                     "as the default answer."));
        auto frame = rig.planner.extract_time_frame(
            "on which date did sgml distribute dividends the first time?",
            "02/28/2024, 08:25:10 PT");
        CHECK(frame.is_point());
        CHECK(frame.start == "02/28/2024");
    }
    SUBCASE("open-ended future ranges parse") {
        PlannerRig rig(movie_backend(),
                       scripted_time("The time frame should be <03/15/2024 ~ future>."));
        auto frame = rig.planner.extract_time_frame(
            "what's the schedule looking like for west ham's next game in eng-premier league?",
            "03/15/2024, 15:48:32 PT");
        CHECK(frame.open_ended);
        CHECK(frame.start == "03/15/2024");
    }
    SUBCASE("garbage output falls back to the query time with a warning") {
        PlannerRig rig(movie_backend(), scripted_time("no brackets whatsoever"));
        auto frame = rig.planner.extract_time_frame("anything?", "02/28/2024, 08:25:10 PT");
        CHECK(frame.is_point());
        CHECK(frame.start == "02/28/2024");
        CHECK(frame.defaulted_warning);
    }
}

TEST_CASE("trigram similarity bounds, identity, symmetry") {
    CHECK(trigram_similarity("South_Vietnam_Air_Force", "south vietnam air force") == 1.0);
    CHECK(trigram_similarity("abcdef", "uvwxyz") == 0.0);
    CHECK(trigram_similarity("", "") == 1.0);

    std::mt19937 rng(42);
    for (int i = 0; i < 200; ++i) {
        auto random_word = [&] {
            std::string s;
            int len = static_cast<int>(rng() % 12);
            for (int j = 0; j < len; ++j)
                s += static_cast<char>('a' + rng() % 26);
            return s;
        };
        std::string a = random_word(), b = random_word();
        double ab = trigram_similarity(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == trigram_similarity(b, a));
        CHECK(trigram_similarity(a, a) == 1.0);
    }
}

TEST_CASE("candidate pairs rank the matching entity first") {
    std::vector<std::string> entities{"Vietnam", "South_Vietnam_Air_Force", "Paris"};
    std::vector<std::string> predicates{"Air_Force", "aircraftBomber", "population"};
    auto pairs = ngram_candidate_pairs(
        "What aircraft bomber was used by the South Vietnam Air Force?", entities, predicates, 3);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].entity == "South_Vietnam_Air_Force");
    for (size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].score >= pairs[i].score);
    for (const auto& pair : pairs) {
        CHECK(pair.score >= 0.0);
        CHECK(pair.score <= 1.0);
    }
}

TEST_CASE("candidate pairs cap at k and handle empty question") {
    std::vector<std::string> entities{"a", "b", "c", "d"};
    std::vector<std::string> predicates{"p", "q"};
    CHECK(ngram_candidate_pairs("alpha beta", entities, predicates, 3).size() == 3);
    CHECK(ngram_candidate_pairs("", entities, predicates, 3).empty());
}

TEST_CASE("llm filtering drops the irrelevant person relations") {
    PlannerRig rig(movie_backend(), desk_router);
    auto offered = schema_neighbors(rig.backend->ontology(), "movie", "person");
    PlanContext context{"movie",
                        {*rig.backend->resolve_entity("Patty Ross", "movie")},
                        1,
                        {},
                        kQueryTime};
    auto decision = rig.planner.filter_relations(kPattyQuestion, offered, context);

    CHECK(decision.kept == std::vector<std::string>{"acted_movies"});
    CHECK(decision.dropped == std::vector<std::string>{"birthday", "birth_place"});
    CHECK(!decision.sufficient);  // knowing the movies alone is not enough

    // Partition: kept ∪ dropped = offered, disjoint.
    std::set<std::string> all;
    for (const auto& name : decision.kept) all.insert(name);
    for (const auto& name : decision.dropped) CHECK(all.insert(name).second);
    CHECK(all.size() == offered.size());
}

TEST_CASE("similarity filtering keeps min(k, n) relations ordered by score") {
    std::ostringstream fixture;
    fixture << "[ontology]\n";
    for (int i = 0; i < 10; ++i)
        fixture << "REL\td\tt\trel" << i << "\tattr:text\tdescription word" << i << "\n";
    std::istringstream in(fixture.str());
    auto backend = parse_fixture(in, "ten.kg");

    PlannerConfig config;
    config.filter_mode = FilterMode::similarity;
    config.top_k = 30;
    config.boundary_check = false;
    FnProvider provider(desk_router);
    ChatClient chat(default_catalog(), provider);
    Planner planner(chat, *backend, config);

    auto offered = schema_neighbors(backend->ontology(), "d", "t");
    PlanContext context{"d", {EntityRef{"x", "x", "t"}}, 1, {}, ""};
    auto decision = planner.filter_relations("which description matches word3?", offered, context);
    CHECK(decision.kept.size() == 10);  // min(30, 10)
    CHECK(decision.dropped.empty());
    CHECK(decision.sufficient);  // one hop when the boundary check is off

    auto again = planner.filter_relations("which description matches word3?", offered, context);
    CHECK(again.kept == decision.kept);  // deterministic tie-break
}

TEST_CASE("similarity filtering truncates to top_k by embedding score") {
    std::ostringstream fixture;
    fixture << "[ontology]\n";
    fixture << "REL\td\tt\tbox_office\tattr:number\tworldwide box office gross revenue\n";
    for (int i = 0; i < 5; ++i)
        fixture << "REL\td\tt\tnoise" << i << "\tattr:text\tunrelated filler field " << i << "\n";
    std::istringstream in(fixture.str());
    auto backend = parse_fixture(in, "topk.kg");

    PlannerConfig config;
    config.filter_mode = FilterMode::similarity;
    config.top_k = 2;
    config.boundary_check = false;
    FnProvider provider(desk_router);
    ChatClient chat(default_catalog(), provider);
    Planner planner(chat, *backend, config);

    auto offered = schema_neighbors(backend->ontology(), "d", "t");
    PlanContext context{"d", {EntityRef{"x", "x", "t"}}, 1, {}, ""};
    auto decision =
        planner.filter_relations("what is the worldwide box office gross revenue?", offered,
                                 context);
    REQUIRE(decision.kept.size() == 2);
    CHECK(decision.kept[0] == "box_office");
    CHECK(decision.dropped.size() == 4);
}

TEST_CASE("an <NA> boundary tag aborts the plan to missing") {
    PlannerRig rig(movie_backend(), [](const RenderedPrompt& prompt, const ChatRequest& request) {
        if (prompt.template_id == "filter.hop_boundary") return std::string("<NA>");
        return desk_router(prompt, request);
    });
    CHECK_THROWS_WITH_AS(rig.planner.build_plan(kPattyQuestion, kQueryTime),
                         doctest::Contains("wrongly linked"), PlanningError);
}

TEST_CASE("build_plan walks to the box office at hop two") {
    PlannerRig rig(movie_backend(), desk_router);
    PlanTrace trace;
    auto plan = rig.planner.build_plan(kPattyQuestion, kQueryTime, &trace);

    CHECK(plan.domain == "movie");
    REQUIRE(plan.topic_entities.size() == 1);
    CHECK(plan.topic_entities[0].id == "Patty Ross");
    CHECK(plan.hops == 2);
    REQUIRE(plan.excluded.size() == 2);
    CHECK(plan.excluded[0].count("birthday") == 1);
    CHECK(plan.excluded[0].count("birth_place") == 1);
    CHECK(plan.excluded[1].empty());
    REQUIRE(plan.time_frame.has_value());
    CHECK(plan.time_frame->start == "03/05/2024");

    REQUIRE(trace.hops.size() == 2);
    CHECK(trace.hops[0].offered ==
          std::vector<std::string>{"acted_movies", "birthday", "birth_place"});
    CHECK(trace.hops[1].kept == std::vector<std::string>{"box_office"});
    CHECK(trace.hops[1].sufficient);
}

TEST_CASE("a sufficient first hop terminates at h = 1") {
    PlannerRig rig(movie_backend(), desk_router);
    auto plan = rig.planner.build_plan(
        "What is the worldwide box office of Harbor Lights?", kQueryTime);
    CHECK(plan.hops == 1);
    CHECK(plan.excluded.size() == 1);
}

TEST_CASE("a never-sufficient filter halts at max_hops") {
    std::istringstream in(
        "[ontology]\n"
        "REL\tchain\tt0\tr01\tentity:t1\tLink from t0 to t1.\n"
        "REL\tchain\tt1\tr12\tentity:t2\tLink from t1 to t2.\n"
        "REL\tchain\tt2\tr23\tentity:t3\tLink from t2 to t3.\n"
        "REL\tchain\tt3\tr34\tentity:t0\tLink from t3 back to t0.\n"
        "[triples]\n"
        "T\ta\tt0\tr01\tE:b:t1\n"
        "T\tb\tt1\tr12\tE:c:t2\n"
        "T\tc\tt2\tr23\tE:d:t3\n"
        "T\td\tt3\tr34\tE:a:t0\n");
    auto backend = parse_fixture(in, "chain.kg");

    FnProvider provider([](const RenderedPrompt& prompt, const ChatRequest&) -> std::string {
        if (prompt.template_id == "planning.entity_domain")
            return R"({"domain": "chain", "main_entity": "a"})";
        if (prompt.template_id == "filter.tools") {
            for (const char* name : {"r01", "r12", "r23", "r34"})
                if (prompt.text.find(std::string("'") + name + "'") != std::string::npos)
                    return "<function=" + std::string(name) + "></function>; <CONTINUE>";
            return "I don't know";
        }
        if (prompt.template_id == "filter.hop_boundary") return "<NO>";
        return "I don't know";
    });
    ChatClient chat(default_catalog(), provider);
    PlannerConfig config;
    config.extract_time = false;
    Planner planner(chat, *backend, config);

    auto plan = planner.build_plan("Where does the chain from a end?", "");
    CHECK(plan.hops == 3);  // default max per configuration
    CHECK(plan.excluded.size() == 3);
}

TEST_CASE("malformed filter output is tolerated once then fails the plan") {
    std::atomic<int> filter_calls{0};
    PlannerRig rig(movie_backend(), [&](const RenderedPrompt& prompt, const ChatRequest& request) {
        if (prompt.template_id == "filter.tools") {
            ++filter_calls;
            return std::string("complete gibberish with no selection");
        }
        return desk_router(prompt, request);
    });
    CHECK_THROWS_WITH_AS(rig.planner.build_plan(kPattyQuestion, kQueryTime),
                         doctest::Contains("malformed"), PlanningError);
    // Two rounds, each with one re-prompt.
    CHECK(filter_calls.load() == 4);
}

TEST_CASE("exclusions always come from the offered set") {
    std::mt19937 rng(123);
    for (int round = 0; round < 60; ++round) {
        unsigned seed = rng();
        FnProvider provider([seed](const RenderedPrompt& prompt, const ChatRequest&)
                                -> std::string {
            std::mt19937 local(seed ^ fnv1a64(prompt.fingerprint));
            if (prompt.template_id == "planning.entity_domain")
                return R"({"domain": "movie", "person": "Patty Ross"})";
            if (prompt.template_id == "filter.tools") {
                switch (local() % 5) {
                    case 0: return "<function=acted_movies></function>; <CONTINUE>";
                    case 1: return "<function=birthday></function>";
                    case 2:
                        return "<function=acted_movies></function>; "
                               "<function=birth_place></function>";
                    case 3: return "I don't know";
                    default: return "<function=box_office></function>";
                }
            }
            if (prompt.template_id == "filter.hop_boundary")
                return local() % 2 == 0 ? "<YES>" : "<NO>";
            return "I don't know";
        });
        ChatClient chat(default_catalog(), provider);
        auto backend = movie_backend();
        PlannerConfig config;
        config.extract_time = false;
        config.max_hops = 1 + static_cast<int>(rng() % 3);
        Planner planner(chat, *backend, config);

        RetrievalPlan plan;
        try {
            plan = planner.build_plan(kPattyQuestion, "");
        } catch (const PlanningError&) {
            continue;  // fail-to-missing is a valid terminal
        }
        CHECK(plan.hops <= config.max_hops);
        CHECK(plan.excluded.size() == static_cast<size_t>(plan.hops));

        // Recompute the offered sets and check exclusion soundness.
        const auto& ontology = backend->ontology();
        std::set<std::string> person_offered, movie_offered;
        for (const auto& rel : schema_neighbors(ontology, "movie", "person"))
            person_offered.insert(rel.name);
        for (const auto& rel : schema_neighbors(ontology, "movie", "movie"))
            movie_offered.insert(rel.name);
        for (const auto& name : plan.excluded[0]) CHECK(person_offered.count(name) == 1);
        for (size_t hop = 1; hop < plan.excluded.size(); ++hop)
            for (const auto& name : plan.excluded[hop])
                CHECK((person_offered.count(name) == 1 || movie_offered.count(name) == 1));
    }
}

TEST_CASE("a valid domain hint overrides the extracted domain") {
    std::istringstream in(
        "REL\tmovie\tperson\tacted_movies\tentity:movie\tMovies the person acted in.\n"
        "REL\tsports\tperson\tteams\tattr:text\tTeams the person played for.\n");
    auto backend = parse_fixture(in, "hint.kg");
    FnProvider provider([](const RenderedPrompt& prompt, const ChatRequest& request) {
        if (prompt.template_id == "planning.entity_domain")
            return std::string(R"({"domain": "movie", "person": "Someone"})");
        return desk_router(prompt, request);
    });
    ChatClient chat(default_catalog(), provider);
    PlannerConfig config;
    config.extract_time = false;
    config.filter_mode = FilterMode::none;
    Planner planner(chat, *backend, config);

    PlanTrace trace;
    auto plan = planner.build_plan("What teams did Someone play for?", "", &trace, "sports");
    CHECK(plan.domain == "sports");
    // an unknown hint falls back to the extraction
    auto fallback = planner.build_plan("What teams did Someone play for?", "", nullptr, "cuisine");
    CHECK(fallback.domain == "movie");
}

TEST_CASE("multi-entity plans share one excluded list and one hop count") {
    PlannerConfig config;
    config.multi_entity = true;
    config.extract_time = false;
    PlannerRig rig(
        movie_backend(),
        [](const RenderedPrompt& prompt, const ChatRequest& request) -> std::string {
            if (prompt.template_id == "planning.entity_domain")
                return R"({"domain": "movie", "entities": ["Patty Ross", "Gene Park"]})";
            return desk_router(prompt, request);
        },
        config);
    auto plan = rig.planner.build_plan(
        "Whose films earned more at the box office, Patty Ross or Gene Park?", "");
    REQUIRE(plan.topic_entities.size() == 2);
    CHECK(plan.hops == 2);
    CHECK(plan.excluded.size() == 2);  // one shared list per hop, not per entity
    CHECK(plan.excluded[0].count("birthday") == 1);
}

TEST_CASE("entity mention removal strips the longest common substring") {
    CHECK(remove_entity_mentions("Which of Patty Ross's film has the highest box office?",
                                 {"Patty Ross"}) ==
          "Which of 's film has the highest box office?");
    CHECK(remove_entity_mentions("where was PATTY ROSS born?", {"Patty Ross"}) ==
          "where was  born?");
    CHECK(remove_entity_mentions("no mention here", {"Zanzibar Quartet"}) == "no mention here");
}
