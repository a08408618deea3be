#include "support/test_support.hpp"

#include "kerag/errors.hpp"
#include "kerag/kg/api_backend.hpp"
#include "kerag/kg/sparql_backend.hpp"

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <thread>

using namespace kerag;
using namespace kerag::test;

namespace {

std::shared_ptr<ApiBackend> mock_finance_registry() {
    auto backend = std::make_shared<ApiBackend>();
    FunctionSpec market_cap;
    market_cap.name = "finance_get_market_capitalization";
    market_cap.description = "Return the market capitalization of a ticker.";
    market_cap.domain = "finance";
    market_cap.subject_type = "ticker";
    market_cap.entity_arg = "ticker_name";
    market_cap.required_args = {"ticker_name"};
    market_cap.object_datatype = LiteralKind::number;
    backend->register_function(market_cap, [](const ArgMap& args) -> std::string {
        if (args.at("ticker_name") == "XYZ") return R"({"marketCap": 1250000000})";
        throw DataError("no such ticker");
    });

    FunctionSpec price_history;
    price_history.name = "finance_get_price_history";
    price_history.description = "Return daily Open price, Close price, High price, Low price and "
                                "trading Volume.";
    price_history.domain = "finance";
    price_history.subject_type = "ticker";
    price_history.entity_arg = "ticker_name";
    price_history.required_args = {"ticker_name"};
    backend->register_function(price_history, [](const ArgMap&) -> std::string {
        return R"({"price": {"open": 12.5, "close": 13.1},
                   "volume": [100, 200],
                   "details": {"meta": {"exchange": "NYX", "lot": 10}}})";
    });

    FunctionSpec awarded;
    awarded.name = "music_grammy_get_all_awarded_artists";
    awarded.description = "Get all artists awarded the Grammy Best New Artist.";
    awarded.domain = "music";
    awarded.subject_type = "award";
    awarded.entity_arg = "";
    awarded.object_is_entity = true;
    awarded.object_entity_type = "artist";
    backend->register_function(
        awarded, [](const ArgMap&) -> std::string { return R"({"artists": ["A", "B"]})"; });
    return backend;
}

}  // namespace

TEST_CASE("api dispatch flattens a scalar result to one triple") {
    auto backend = mock_finance_registry();
    auto triples =
        backend->api_dispatch("finance_get_market_capitalization", {{"ticker_name", "XYZ"}});
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].subject.id == "XYZ");
    CHECK(triples[0].subject.entity_type == "ticker");
    CHECK(triples[0].predicate == "marketCap");
    const auto* lit = as_literal(triples[0].object);
    REQUIRE(lit != nullptr);
    CHECK(lit->value == "1250000000");
    CHECK(lit->datatype == LiteralKind::number);
    CHECK(triples[0].source == "api:finance_get_market_capitalization(XYZ)");
}

TEST_CASE("api dispatch ignores extra args but insists on required ones") {
    auto backend = mock_finance_registry();
    auto triples = backend->api_dispatch(
        "finance_get_market_capitalization",
        {{"ticker_name", "XYZ"}, {"verbose", "yes"}, {"unused", "1"}});
    CHECK(triples.size() == 1);

    CHECK_THROWS_AS(backend->api_dispatch("finance_get_market_capitalization", {{"wrong", "x"}}),
                    ArgumentError);
}

TEST_CASE("zero-required-arg functions accept extras") {
    auto backend = mock_finance_registry();
    auto triples =
        backend->api_dispatch("music_grammy_get_all_awarded_artists", {{"extra", "ignored"}});
    REQUIRE(triples.size() == 2);
    const auto* artist = as_entity(triples[0].object);
    REQUIRE(artist != nullptr);
    CHECK(artist->entity_type == "artist");
}

TEST_CASE("unknown functions name the nearest declared one") {
    auto backend = mock_finance_registry();
    CHECK_THROWS_WITH_AS(
        backend->api_dispatch("finance_get_market_capitalisation", {{"ticker_name", "XYZ"}}),
        doctest::Contains("finance_get_market_capitalization"), RegistryError);
}

TEST_CASE("nested results flatten one level, deeper nests become records") {
    auto backend = mock_finance_registry();
    auto triples = backend->api_dispatch("finance_get_price_history", {{"ticker_name", "XYZ"}});

    std::map<std::string, std::string> by_predicate;
    for (const auto& t : triples) by_predicate[t.predicate] = node_text(t.object);
    CHECK(by_predicate.count("price.open") == 1);
    CHECK(by_predicate.count("price.close") == 1);
    CHECK(by_predicate.at("price.open") == "12.5");
    // array fields yield one triple per element
    int volume_triples = 0;
    for (const auto& t : triples)
        if (t.predicate == "volume") ++volume_triples;
    CHECK(volume_triples == 2);
    // depth-two nesting is canonical structured text
    REQUIRE(by_predicate.count("details.meta") == 1);
    CHECK(by_predicate.at("details.meta") == R"({"exchange":"NYX","lot":10})");
}

TEST_CASE("api fetch_neighbors dispatches keep-listed functions per entity") {
    auto backend = mock_finance_registry();
    std::vector<EntityRef> entities{EntityRef{"XYZ", "XYZ", "ticker"},
                                    EntityRef{"MISSING", "MISSING", "ticker"}};
    std::vector<std::string> keep{"finance_get_market_capitalization"};
    auto outcome = backend->fetch_neighbors(entities, keep, 2);

    REQUIRE(outcome.triples.size() == 1);
    CHECK(outcome.triples[0].hop == 2);
    CHECK(outcome.triples[0].subject.id == "XYZ");
    // the failed entity annotates errors without aborting the batch
    REQUIRE(outcome.errors.size() == 1);
    CHECK(outcome.errors[0].entity_id == "MISSING");
}

TEST_CASE("the registry doubles as the backend's ontology") {
    auto backend = mock_finance_registry();
    auto offered = schema_neighbors(backend->ontology(), "finance", "ticker");
    REQUIRE(offered.size() == 2);
    CHECK(offered[0].name == "finance_get_market_capitalization");

    std::string entry = backend->tool_catalog_entry(offered[0]);
    CHECK(entry.find("Use the function 'finance_get_market_capitalization'") == 0);
    CHECK(entry.find("\"ticker_name\"") != std::string::npos);
    CHECK(entry.find("\"required\":[\"ticker_name\"]") != std::string::npos);

    auto resolved = backend->resolve_entity("XYZ", "finance");
    REQUIRE(resolved.has_value());
    CHECK(resolved->entity_type == "ticker");
}

TEST_CASE("registry files load with canned responses") {
    TempDir dir("registry");
    std::string path = dir.write("finance.api.json", R"({
      "functions": [
        {"name": "finance_get_market_capitalization",
         "description": "Return the market capitalization of a ticker.",
         "domain": "finance", "subject_type": "ticker",
         "entity_arg": "ticker_name", "required": ["ticker_name"],
         "object": {"kind": "attribute", "datatype": "number"},
         "responses": {"XYZ": {"marketCap": 1250000000}}}
      ]})");
    auto backend = ApiBackend::load_registry(path);
    auto triples =
        backend->api_dispatch("finance_get_market_capitalization", {{"ticker_name", "XYZ"}});
    REQUIRE(triples.size() == 1);
    CHECK(node_text(triples[0].object) == "1250000000");

    CHECK_THROWS_AS(ApiBackend::load_registry(dir.write("broken.json", "[]")), FormatError);
}

namespace {

// Serves a loaded fixture graph through the SPARQL JSON results protocol.
class MockSparqlServer {
public:
    explicit MockSparqlServer(std::shared_ptr<MemoryBackend> graph,
                              std::string entity_prefix = "http://kg.test/e/",
                              std::string predicate_prefix = "http://kg.test/p/")
        : graph_(std::move(graph)),
          entity_prefix_(std::move(entity_prefix)),
          predicate_prefix_(std::move(predicate_prefix)) {
        server_.Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockSparqlServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port_) + "/sparql";
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        std::string query = req.get_param_value("query");
        // The one-hop template: SELECT ?o WHERE { <subject> <predicate> ?o . }
        size_t s_open = query.find('<');
        size_t s_close = query.find('>', s_open);
        size_t p_open = query.find('<', s_close);
        size_t p_close = query.find('>', p_open);
        if (s_open == std::string::npos || p_close == std::string::npos) {
            res.status = 400;
            return;
        }
        std::string subject_iri = query.substr(s_open + 1, s_close - s_open - 1);
        std::string predicate_iri = query.substr(p_open + 1, p_close - p_open - 1);

        std::string subject = subject_iri.substr(entity_prefix_.size());
        std::replace(subject.begin(), subject.end(), '_', ' ');
        std::string predicate = predicate_iri.substr(predicate_prefix_.size());

        nlohmann::json bindings = nlohmann::json::array();
        for (const auto& edge : graph_->edges()) {
            if (edge.subject.id != subject || edge.predicate != predicate) continue;
            if (const auto* e = as_entity(edge.object)) {
                std::string local = e->id;
                std::replace(local.begin(), local.end(), ' ', '_');
                bindings.push_back({{"o", {{"type", "uri"}, {"value", entity_prefix_ + local}}}});
            } else {
                bindings.push_back(
                    {{"o", {{"type", "literal"}, {"value", as_literal(edge.object)->value}}}});
            }
        }
        nlohmann::json body = {{"head", {{"vars", nlohmann::json::array({"o"})}}},
                               {"results", {{"bindings", bindings}}}};
        res.set_content(body.dump(), "application/sparql-results+json");
    }

    std::shared_ptr<MemoryBackend> graph_;
    std::string entity_prefix_;
    std::string predicate_prefix_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

std::multiset<std::string> multiset_ignoring_source(const std::vector<Triple>& triples) {
    std::multiset<std::string> keys;
    for (const auto& t : triples) keys.insert(triple_key(t));
    return keys;
}

}  // namespace

TEST_CASE("the one-hop query template is subject to object only") {
    SparqlConfig config;
    config.endpoint = "http://127.0.0.1:9/sparql";
    config.entity_iri_prefix = "http://kg.test/e/";
    config.predicate_iri_prefix = "http://kg.test/p/";
    SparqlBackend backend(config, movie_backend()->ontology());
    CHECK(backend.one_hop_query(EntityRef{"Patty Ross", "Patty Ross", "person"}, "acted_movies") ==
          "SELECT ?o WHERE { <http://kg.test/e/Patty_Ross> "
          "<http://kg.test/p/acted_movies> ?o . }");
}

TEST_CASE("sparql and in-memory backends agree on the same graph") {
    auto graph = movie_backend();
    MockSparqlServer server(graph);

    SparqlConfig config;
    config.endpoint = server.endpoint();
    config.entity_iri_prefix = "http://kg.test/e/";
    config.predicate_iri_prefix = "http://kg.test/p/";
    SparqlBackend sparql(config, graph->ontology());

    std::vector<EntityRef> entities{*graph->resolve_entity("Patty Ross", "movie"),
                                    *graph->resolve_entity("Starlight Sonata", "movie")};
    std::vector<std::string> keep{"acted_movies", "birthday", "box_office"};

    auto from_memory = graph->fetch_neighbors(entities, keep, 1);
    auto from_sparql = sparql.fetch_neighbors(entities, keep, 1);
    CHECK(from_sparql.errors.empty());
    CHECK(multiset_ignoring_source(from_memory.triples) ==
          multiset_ignoring_source(from_sparql.triples));

    // Typed objects come from the ontology's relation declarations.
    bool saw_movie_object = false;
    for (const auto& t : from_sparql.triples)
        if (const auto* e = as_entity(t.object)) {
            CHECK(e->entity_type == "movie");
            saw_movie_object = true;
        }
    CHECK(saw_movie_object);
}

TEST_CASE("sparql transport failures are retryable per-entity errors") {
    SparqlConfig config;
    config.endpoint = "http://127.0.0.1:1/sparql";  // nothing listens here
    config.timeout_seconds = 1;
    SparqlBackend backend(config, movie_backend()->ontology());
    std::vector<EntityRef> entities{EntityRef{"Patty Ross", "Patty Ross", "person"}};
    std::vector<std::string> keep{"acted_movies"};
    auto outcome = backend.fetch_neighbors(entities, keep, 1);
    CHECK(outcome.triples.empty());
    REQUIRE(outcome.errors.size() == 1);
    CHECK(outcome.errors[0].retryable);
}

TEST_CASE("untyped topic entities are offered the whole domain's relations") {
    auto graph = movie_backend();
    std::vector<std::string> untyped{kUntypedEntity};
    auto offered = offered_relations(graph->ontology(), "movie", untyped);
    REQUIRE(offered.size() == 4);  // person and movie relations together
    CHECK(offered[0].name == "acted_movies");
    CHECK(offered[3].name == "box_office");
}

TEST_CASE("the full pipeline runs against a sparql endpoint") {
    auto graph = movie_backend();
    MockSparqlServer server(graph);

    SparqlConfig sparql;
    sparql.endpoint = server.endpoint();
    sparql.entity_iri_prefix = "http://kg.test/e/";
    sparql.predicate_iri_prefix = "http://kg.test/p/";
    sparql.entity_list = {"Patty Ross", "Gene Park"};
    auto backend = std::make_shared<SparqlBackend>(sparql, graph->ontology());

    QuestionRecord question;
    question.id = "sq1";
    question.query =
        "Which of Patty Ross's film has achieved the highest box office success globally?";
    question.query_time = "03/05/2024, 10:00:00 PT";

    FnProvider provider(desk_router);
    ChatClient chat(default_catalog(), provider);
    PipelineConfig pipeline;

    AskOutcome outcome = answer_question(question, chat, *backend, pipeline);
    REQUIRE(outcome.plan.has_value());
    CHECK(outcome.plan->hops == 2);
    // The topic entity resolves untyped, so hop 1 offers all four relations.
    CHECK(outcome.plan->excluded[0].count("box_office") == 1);
    CHECK(outcome.plan->excluded[0].count("birthday") == 1);
    CHECK(outcome.subgraph.triples.size() == 6);
    CHECK(!outcome.answer.is_missing);
    CHECK(outcome.answer.text == "Starlight Sonata");
    for (const auto& t : outcome.subgraph.triples)
        CHECK(t.source.rfind("sparql:", 0) == 0);
}

TEST_CASE("sparql entity lists drive resolution") {
    SparqlConfig config;
    config.endpoint = "http://127.0.0.1:9/sparql";
    config.entity_list = {"South_Vietnam_Air_Force", "Vietnam"};
    SparqlBackend backend(config, open_backend()->ontology());

    auto resolved = backend.resolve_entity("south vietnam air force", "open");
    REQUIRE(resolved.has_value());
    CHECK(resolved->id == "South_Vietnam_Air_Force");
    CHECK(!backend.resolve_entity("Unrelated", "open").has_value());
}
