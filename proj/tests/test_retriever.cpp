#include "support/test_support.hpp"

#include "kerag/errors.hpp"
#include "kerag/retriever/retriever.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace kerag;
using namespace kerag::test;

namespace {

RetrievalPlan patty_plan(const MemoryBackend& backend, int hops) {
    RetrievalPlan plan;
    plan.domain = "movie";
    plan.topic_entities = {*backend.resolve_entity("Patty Ross", "movie")};
    plan.hops = hops;
    plan.excluded.assign(static_cast<size_t>(hops), {});
    return plan;
}

}  // namespace

TEST_CASE("executing the walked plan gathers movies then box office, never birthdays") {
    auto backend = movie_backend();
    RetrievalPlan plan = patty_plan(*backend, 2);
    plan.excluded[0] = {"birthday", "birth_place"};

    auto result = execute_plan(plan, *backend);
    const Subgraph& sub = result.subgraph;
    CHECK(sub.hops_done == 2);
    CHECK(sub.triples.size() == 6);  // 3 acted_movies + 3 box_office

    int hop1 = 0, hop2 = 0;
    for (const auto& t : sub.triples) {
        CHECK(t.predicate != "birthday");
        CHECK(t.predicate != "birth_place");
        if (t.hop == 1) {
            ++hop1;
            CHECK(t.predicate == "acted_movies");
        } else {
            ++hop2;
            CHECK(t.predicate == "box_office");
        }
    }
    CHECK(hop1 == 3);
    CHECK(hop2 == 3);
}

TEST_CASE("excluding everything yields an empty subgraph with hops_done intact") {
    auto backend = movie_backend();
    RetrievalPlan plan = patty_plan(*backend, 2);
    plan.excluded[0] = {"acted_movies", "birthday", "birth_place"};
    plan.excluded[1] = {"box_office"};

    auto result = execute_plan(plan, *backend);
    CHECK(result.subgraph.triples.empty());
    CHECK(result.subgraph.hops_done == 2);
    CHECK(result.subgraph.frontier.empty());
    CHECK(result.errors.empty());
}

TEST_CASE("full-depth unfiltered execution equals the BFS closure on authored fixtures") {
    struct Case {
        std::shared_ptr<MemoryBackend> backend;
        std::string topic;
        std::string domain;
    };
    for (const auto& c : {Case{movie_backend(), "Patty Ross", "movie"},
                          Case{finance_backend(), "RCM", "finance"},
                          Case{open_backend(), "South_Vietnam_Air_Force", "open"}}) {
        RetrievalPlan plan;
        plan.domain = c.domain;
        plan.topic_entities = {*c.backend->resolve_entity(c.topic, c.domain)};
        plan.hops = 3;
        plan.excluded.assign(3, {});

        auto result = execute_plan(plan, *c.backend);
        std::set<std::string> got;
        subgraph_keys_of(result.subgraph, &got);
        std::set<std::string> expected = bfs_closure_keys(c.backend->edges(), {c.topic}, 3);
        CHECK(got == expected);
    }
}

TEST_CASE("frontier entities appear as objects of the final hop") {
    auto backend = movie_backend();
    RetrievalPlan plan = patty_plan(*backend, 1);
    auto result = execute_plan(plan, *backend);

    std::set<std::string> final_hop_objects;
    for (const auto& t : result.subgraph.triples)
        if (t.hop == result.subgraph.hops_done)
            if (const auto* e = as_entity(t.object)) final_hop_objects.insert(e->id);
    CHECK(!result.subgraph.frontier.empty());
    for (const auto& entity : result.subgraph.frontier)
        CHECK(final_hop_objects.count(entity.id) == 1);
}

TEST_CASE("duplicate triples keep the lowest hop stamp") {
    std::istringstream in(
        "[ontology]\n"
        "REL\tloop\tnode\tnext\tentity:node\tNext node in the loop.\n"
        "[triples]\n"
        "T\ta\tnode\tnext\tE:b:node\n"
        "T\tb\tnode\tnext\tE:a:node\n");
    auto backend = parse_fixture(in, "loop.kg");
    RetrievalPlan plan;
    plan.domain = "loop";
    plan.topic_entities = {*backend->resolve_entity("a", "loop")};
    plan.hops = 3;
    plan.excluded.assign(3, {});

    auto result = execute_plan(plan, *backend);
    REQUIRE(result.subgraph.triples.size() == 2);
    for (const auto& t : result.subgraph.triples) CHECK(t.hop <= 2);
}

TEST_CASE("randomized fixtures: closure equality and exclusion soundness") {
    std::mt19937 rng(2024);
    int equality_rounds = 0;
    for (int round = 0; round < 120; ++round) {
        RandomGraph graph = random_graph(rng, 9 + static_cast<int>(rng() % 10),
                                         20 + static_cast<int>(rng() % 120));
        REQUIRE(graph.edges.size() <= 200);
        auto backend = std::make_shared<MemoryBackend>(graph.ontology, graph.edges);
        if (graph.edges.empty()) continue;

        const Edge& seed_edge = graph.edges[rng() % graph.edges.size()];
        RetrievalPlan plan;
        plan.domain = "rand";
        plan.topic_entities = {seed_edge.subject};
        plan.hops = 1 + static_cast<int>(rng() % 3);
        plan.excluded.assign(static_cast<size_t>(plan.hops), {});

        auto unfiltered = execute_plan(plan, *backend);
        std::set<std::string> got;
        subgraph_keys_of(unfiltered.subgraph, &got);
        std::set<std::string> expected =
            bfs_closure_keys(graph.edges, {seed_edge.subject.id}, plan.hops);
        CHECK(got == expected);
        ++equality_rounds;

        // A random exclusion set never leaks an excluded predicate.
        auto predicates = graph.ontology.predicate_names();
        for (auto& hop_excluded : plan.excluded)
            for (const auto& name : predicates)
                if (rng() % 3 == 0) hop_excluded.insert(name);
        auto filtered = execute_plan(plan, *backend);
        for (const auto& t : filtered.subgraph.triples) {
            REQUIRE(t.hop >= 1);
            REQUIRE(t.hop <= plan.hops);
            CHECK(plan.excluded[static_cast<size_t>(t.hop - 1)].count(t.predicate) == 0);
        }

        // Monotonicity: one fewer hop retrieves a subset.
        if (plan.hops > 1) {
            RetrievalPlan shorter;
            shorter.domain = plan.domain;
            shorter.topic_entities = plan.topic_entities;
            shorter.hops = plan.hops - 1;
            shorter.excluded.assign(static_cast<size_t>(shorter.hops), {});
            auto small = execute_plan(shorter, *backend);
            std::set<std::string> small_keys;
            subgraph_keys_of(small.subgraph, &small_keys);
            for (const auto& key : small_keys) CHECK(got.count(key) == 1);
        }
    }
    CHECK(equality_rounds >= 100);
}

TEST_CASE("linearize renders ordered TRIPLE lines within budget") {
    auto backend = movie_backend();
    RetrievalPlan plan = patty_plan(*backend, 2);
    plan.excluded[0] = {"birthday", "birth_place"};
    auto result = execute_plan(plan, *backend);

    auto evidence = linearize(result.subgraph, 30, &backend->ontology());
    CHECK(evidence.triple_count == 6);
    CHECK(!evidence.truncated);
    REQUIRE(evidence.lines.size() == 6);
    // hop 1 first, then hop 2; objects sorted within a predicate.
    CHECK(evidence.lines[0] == "TRIPLE: (Patty Ross, acted_movies, Harbor Lights)");
    CHECK(evidence.lines[3] == "TRIPLE: (Harbor Lights, box_office, 175500000)");

    auto again = linearize(result.subgraph, 30, &backend->ontology());
    CHECK(again.lines == evidence.lines);

    auto tight = linearize(result.subgraph, 4, &backend->ontology());
    CHECK(tight.truncated);
    CHECK(tight.lines.size() == 4);
    CHECK(tight.triple_count == 6);
    CHECK(std::equal(tight.lines.begin(), tight.lines.end(), evidence.lines.begin()));

    CHECK_THROWS_AS(linearize(result.subgraph, 0, &backend->ontology()), ArgumentError);
}

TEST_CASE("subgraph dumps carry provenance fields") {
    auto backend = movie_backend();
    auto result = execute_plan(patty_plan(*backend, 1), *backend);
    std::ostringstream out;
    dump_subgraph(out, result.subgraph);
    std::string dump = out.str();
    CHECK(dump.find("\"hop\":1") != std::string::npos);
    CHECK(dump.find("\"source\":\"memory:Patty Ross:acted_movies\"") != std::string::npos);
}
