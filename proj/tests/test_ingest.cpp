#include <doctest.h>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include <thread>

#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/manifest.hpp"
#include "kgforge/ingest/prompts.hpp"
#include "kgforge/ingest/section_graph.hpp"
#include "kgforge/model/client.hpp"
#include "test_support.hpp"

using namespace kgforge;
using namespace kgforge::ingest;

namespace {

nlohmann::json sample_manifest() {
    return nlohmann::json::parse(R"({
      "schema_version": "1",
      "book": {"id": "physics/b01", "title": "Physics 8", "subject": "physics",
               "stage": "middle", "order": 1},
      "sections": [
        {"chapter_title": "Motion", "chapter_order": 2, "section_title": "Speed",
         "section_order": 1, "file": "ch02_s01.json"},
        {"chapter_title": "Motion", "chapter_order": 2, "section_title": "Graphs",
         "section_order": 2, "file": "ch02_s02.json"},
        {"chapter_title": "Sound", "chapter_order": 1, "section_title": "Waves",
         "section_order": 1, "file": "ch01_s01.json"},
        {"chapter_title": "Sound", "chapter_order": 1, "section_title": "Pitch",
         "section_order": 2, "file": "ch01_s02.json"}
      ]
    })");
}

nlohmann::json sample_extraction() {
    return nlohmann::json::parse(R"({
      "schema_version": "1",
      "nodes": [
        {"local_id": "n1", "kind": "Concept", "name": "velocity",
         "props": {"definition": "rate of change of position", "importance": "master"}},
        {"local_id": "n2", "kind": "Concept", "name": "speed",
         "props": {"definition": "distance over time", "importance": "understand"}}
      ],
      "edges": [
        {"kind": "relates_to", "source": "n1", "target": "n2",
         "evidence": "speed is the magnitude of velocity"},
        {"kind": "appears_in", "source": "n1", "target": "@section"}
      ]
    })");
}

} // namespace

TEST_CASE("manifest parses into curriculum order") {
    auto m = testsup::must_get(parse_manifest(sample_manifest()));
    REQUIRE(m.entries.size() == 4);
    CHECK(m.book.subject == "physics");
    CHECK(m.entries[0].chapter_order == 1);
    CHECK(m.entries[0].section_order == 1);
    CHECK(m.entries[3].chapter_order == 2);
    CHECK(m.entries[3].section_order == 2);
}

TEST_CASE("manifest rejects duplicates and bad orders") {
    auto doc = sample_manifest();
    doc["sections"][1]["chapter_order"] = 1;
    doc["sections"][1]["section_order"] = 1;
    CHECK(parse_manifest(doc).code() == Errc::duplicate_section);

    doc = sample_manifest();
    doc["sections"][0]["section_order"] = 0;
    CHECK(parse_manifest(doc).code() == Errc::non_positive_order);

    CHECK(parse_manifest(nlohmann::json{{"book", 7}}).code() == Errc::malformed_document);
}

TEST_CASE("manifest round-trips through its JSON form") {
    auto m = testsup::must_get(parse_manifest(sample_manifest()));
    auto m2 = testsup::must_get(parse_manifest(manifest_to_json(m)));
    CHECK(manifest_to_json(m) == manifest_to_json(m2));
}

TEST_CASE("extraction parsing enforces per-kind required fields with a path") {
    auto doc = sample_extraction();
    doc["nodes"][0]["props"].erase("definition");
    auto r = parse_section_extraction(doc);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == Errc::schema_violation);
    CHECK(r.error().message.find("nodes[0]") != std::string::npos);
    CHECK(r.error().message.find("definition") != std::string::npos);
}

TEST_CASE("extraction rejects unknown local endpoints") {
    auto doc = sample_extraction();
    doc["edges"][0]["target"] = "n99";
    auto r = parse_section_extraction(doc);
    REQUIRE_FALSE(r.ok());
    CHECK(r.code() == Errc::schema_violation);
}

TEST_CASE("extraction preserves and flags unknown fields") {
    auto doc = sample_extraction();
    doc["nodes"][0]["props"]["color"] = "blue";
    auto ex = testsup::must_get(parse_section_extraction(doc));
    REQUIRE(ex.warnings.size() == 1);
    CHECK(ex.warnings[0].find("color") != std::string::npos);
    CHECK(ex.nodes[0].props.contains("color"));
    CHECK(ex.edges[0].evidence == "speed is the magnitude of velocity");
}

TEST_CASE("extraction round-trips") {
    auto ex = testsup::must_get(parse_section_extraction(sample_extraction()));
    auto ex2 = testsup::must_get(parse_section_extraction(extraction_to_json(ex)));
    CHECK(extraction_to_json(ex) == extraction_to_json(ex2));
}

TEST_CASE("build_section_graph synthesizes containers and anchors") {
    auto m = testsup::must_get(parse_manifest(sample_manifest()));
    auto ex = testsup::must_get(parse_section_extraction(sample_extraction()));
    auto g = testsup::must_get(build_section_graph(m.book, m.entries[0], ex));

    // book + chapter + section + 2 concepts
    CHECK(g.node_count() == 5);
    CHECK(g.count_edges_of_kind(graph::EdgeKind::is_part_of) == 2);
    // n1 anchored explicitly via @section, n2 synthesized
    CHECK(g.count_edges_of_kind(graph::EdgeKind::appears_in) == 2);
    CHECK(g.count_edges_of_kind(graph::EdgeKind::relates_to) == 1);
    REQUIRE(g.freeze().empty()); // fragment satisfies assembly invariants

    SectionExtraction empty;
    auto g2 = testsup::must_get(build_section_graph(m.book, m.entries[0], empty));
    CHECK(g2.node_count() == 3);
}

TEST_CASE("extraction prompt renders the section text") {
    auto p1 = testsup::must_get(render_extraction_prompt("# Velocity\nBody one."));
    auto p2 = testsup::must_get(render_extraction_prompt("# Force\nBody two."));
    CHECK(p1.find("truly important and clearly presented") != std::string::npos);
    CHECK(p1.find("# Velocity") != std::string::npos);
    CHECK(p1.find(kSectionPlaceholder) == std::string::npos);
    CHECK(p1.find('{') == std::string::npos); // brace-free template, brace-free input

    // the two prompts differ only where the section text was substituted
    size_t d1 = p1.find("# Velocity");
    size_t d2 = p2.find("# Force");
    CHECK(p1.substr(0, d1) == p2.substr(0, d2));

    CHECK(render_extraction_prompt("   \n").code() == Errc::empty_section);
}

TEST_CASE("stub client is bit-deterministic per prompt and seed") {
    model::StubModelClient client(1234, model::answer_stub_responder());
    model::ChatRequest req{{{"user", "pick a label set"}}, {}};
    std::string first = testsup::must_get(client.send(req));
    for (int i = 0; i < 100; ++i) {
        CHECK(testsup::must_get(client.send(req)) == first);
    }
    model::StubModelClient same_seed(1234, model::answer_stub_responder());
    CHECK(testsup::must_get(same_seed.send(req)) == first);
}

TEST_CASE("stub canned responses and failure injection") {
    model::StubModelClient client(7);
    model::ChatRequest req{{{"user", "hello"}}, {}};
    client.can_response(model::prompt_hash(req), "first");
    client.can_response(model::prompt_hash(req), "second");
    CHECK(testsup::must_get(client.send(req)) == "first");
    CHECK(testsup::must_get(client.send(req)) == "second");
    CHECK(testsup::must_get(client.send(req)) == "second"); // last one sticks

    client.fail_next(2);
    CHECK(client.send(req).code() == Errc::client_failure);
    CHECK(client.send(req).code() == Errc::client_failure);
    CHECK(client.send(req).ok());
}

TEST_CASE("model output salvage strips code fences only") {
    CHECK(parse_model_extraction(R"({"nodes": []})").ok());
    CHECK(parse_model_extraction("```json\n{\"nodes\": []}\n```").ok());
    CHECK(parse_model_extraction("```\n{\"nodes\": []}\n```").ok());
    CHECK(parse_model_extraction("Here is the JSON: {}").code() == Errc::malformed);
}

TEST_CASE("http client speaks the chat-completions wire format") {
    httplib::Server server;
    nlohmann::json seen_body;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen_body = nlohmann::json::parse(req.body);
        nlohmann::json reply = {
            {"choices", {{{"message", {{"role", "assistant"}, {"content", "A,C"}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    model::HttpModelClient client("http://127.0.0.1:" + std::to_string(port), "test-model");
    model::ChatRequest req;
    req.messages = {{"system", "be terse"}, {"user", "answer"}};
    req.params.temperature = 0.0;
    req.params.top_p = 1.0;
    req.params.max_tokens = 32;
    auto reply = client.send(req);
    server.stop();
    t.join();

    REQUIRE(reply.ok());
    CHECK(reply.value() == "A,C");
    CHECK(seen_body["model"] == "test-model");
    CHECK(seen_body["temperature"] == 0.0);
    CHECK(seen_body["max_tokens"] == 32);
    REQUIRE(seen_body["messages"].size() == 2);
    CHECK(seen_body["messages"][0]["role"] == "system");
}
