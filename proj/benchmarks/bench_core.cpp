#include "kerag/kg/fixture.hpp"
#include "kerag/planner/trigram.hpp"
#include "kerag/retriever/retriever.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace kerag;

// Small random graph: three entity types, mixed entity/attribute relations.
std::shared_ptr<MemoryBackend> make_graph(int entity_count, int triple_count, unsigned seed) {
    std::mt19937 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    Ontology ontology;
    const char* types[] = {"t0", "t1", "t2"};
    for (int i = 0; i < 6; ++i) {
        SchemaRelation rel;
        rel.name = "rel" + std::to_string(i);
        rel.domain = "bench";
        rel.subject_type = types[i % 3];
        rel.description = "benchmark relation " + rel.name;
        if (i % 2 == 0) {
            rel.object_is_entity = true;
            rel.object_entity_type = types[(i + 1) % 3];
        } else {
            rel.object_datatype = LiteralKind::number;
        }
        ontology.add_relation(rel);
    }

    std::vector<Edge> edges;
    const auto& relations = ontology.relations();
    for (int i = 0; i < triple_count; ++i) {
        const SchemaRelation& rel = relations[static_cast<size_t>(pick(0, 5))];
        int subject_index = pick(0, entity_count - 1);
        Edge edge;
        edge.subject.id = "e" + std::to_string(subject_index);
        edge.subject.label = edge.subject.id;
        edge.subject.entity_type = rel.subject_type;
        edge.predicate = rel.name;
        if (rel.object_is_entity) {
            int object_index = pick(0, entity_count - 1);
            EntityRef object{"e" + std::to_string(object_index), "e" + std::to_string(object_index),
                             rel.object_entity_type};
            edge.object = object;
        } else {
            edge.object = Literal{std::to_string(pick(0, 100000)), LiteralKind::number};
        }
        edges.push_back(std::move(edge));
    }
    return std::make_shared<MemoryBackend>(std::move(ontology), std::move(edges));
}

void BM_TrigramSimilarity(benchmark::State& state) {
    std::string question = "what aircraft bomber was used by the south vietnam air force?";
    std::string name = "South_Vietnam_Air_Force";
    for (auto _ : state) benchmark::DoNotOptimize(trigram_similarity(question, name));
}
BENCHMARK(BM_TrigramSimilarity);

void BM_CandidatePairs(benchmark::State& state) {
    std::mt19937 rng(11);
    std::vector<std::string> entities, predicates;
    for (int i = 0; i < static_cast<int>(state.range(0)); ++i) {
        entities.push_back("Entity_Number_" + std::to_string(rng() % 100000));
        predicates.push_back("relation_name_" + std::to_string(rng() % 100000));
    }
    std::string question = "which relation of entity number 42 matters most?";
    for (auto _ : state)
        benchmark::DoNotOptimize(ngram_candidate_pairs(question, entities, predicates, 3));
}
BENCHMARK(BM_CandidatePairs)->Arg(16)->Arg(64);

void BM_ExecutePlanClosure(benchmark::State& state) {
    auto backend = make_graph(40, static_cast<int>(state.range(0)), 23);

    RetrievalPlan plan;
    plan.domain = "bench";
    plan.topic_entities.push_back(backend->edges().front().subject);
    plan.hops = 3;
    plan.excluded.assign(3, {});

    for (auto _ : state) benchmark::DoNotOptimize(execute_plan(plan, *backend));
}
BENCHMARK(BM_ExecutePlanClosure)->Arg(100)->Arg(200);

void BM_Linearize(benchmark::State& state) {
    auto backend = make_graph(40, 200, 29);
    RetrievalPlan plan;
    plan.domain = "bench";
    plan.topic_entities.push_back(backend->edges().front().subject);
    plan.hops = 3;
    plan.excluded.assign(3, {});
    auto result = execute_plan(plan, *backend);
    for (auto _ : state)
        benchmark::DoNotOptimize(linearize(result.subgraph, 200, &backend->ontology()));
}
BENCHMARK(BM_Linearize);

}  // namespace

BENCHMARK_MAIN();
