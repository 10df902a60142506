#include <doctest.h>

#include "kgforge/core/hash.hpp"
#include "kgforge/graph/serialize.hpp"
#include "kgforge/validate/validator.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kgforge;
using namespace kgforge::validate;
using kgforge::graph::EdgeKind;
using kgforge::graph::KnowledgeGraph;
using testsup::add_edge;
using testsup::concept_node;
using testsup::must;
using testsup::must_get;

namespace {

KnowledgeGraph concepts(int n) {
    KnowledgeGraph g;
    for (int i = 0; i < n; ++i) {
        std::string id = "n" + std::to_string(100 + i);
        must(g.add_node(concept_node(id, "concept " + id)));
    }
    return g;
}

std::string nid(int i) { return "n" + std::to_string(100 + i); }

} // namespace

TEST_CASE("a 3-cycle is reported once with canonical rotation") {
    KnowledgeGraph g = concepts(4);
    add_edge(g, EdgeKind::prerequisites_for, nid(1), nid(2));
    add_edge(g, EdgeKind::prerequisites_for, nid(2), nid(0));
    add_edge(g, EdgeKind::prerequisites_for, nid(0), nid(1));

    auto report = must_get(detect_cycles(g, EdgeKind::prerequisites_for));
    REQUIRE(report.cycles.size() == 1);
    CHECK(report.cycles[0].nodes == std::vector<std::string>{nid(0), nid(1), nid(2)});
    CHECK(report.scc_count == 1);
}

TEST_CASE("DAGs produce an empty report") {
    KnowledgeGraph g = concepts(4);
    add_edge(g, EdgeKind::prerequisites_for, nid(0), nid(1));
    add_edge(g, EdgeKind::prerequisites_for, nid(1), nid(2));
    add_edge(g, EdgeKind::prerequisites_for, nid(0), nid(2));
    CHECK(must_get(detect_cycles(g, EdgeKind::prerequisites_for)).empty());
    CHECK(must_get(detect_cycles(g, EdgeKind::is_a)).empty());
}

TEST_CASE("two disjoint 2-cycles give exactly two cycles") {
    KnowledgeGraph g = concepts(4);
    add_edge(g, EdgeKind::is_a, nid(0), nid(1));
    add_edge(g, EdgeKind::is_a, nid(1), nid(0));
    add_edge(g, EdgeKind::is_a, nid(2), nid(3));
    add_edge(g, EdgeKind::is_a, nid(3), nid(2));
    auto report = must_get(detect_cycles(g, EdgeKind::is_a));
    CHECK(report.cycles.size() == 2);
    CHECK(report.scc_count == 2);
}

TEST_CASE("only the two DAG-constrained kinds are supported") {
    KnowledgeGraph g = concepts(2);
    CHECK(detect_cycles(g, EdgeKind::relates_to).code() == Errc::unsupported_kind);
}

TEST_CASE("cycle report is independent of edge insertion order") {
    auto build = [](bool reversed) {
        KnowledgeGraph g = concepts(6);
        std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 0}, {3, 4},
                                                  {4, 5}, {5, 3}, {1, 4}};
        if (reversed) std::reverse(edges.begin(), edges.end());
        for (auto [a, b] : edges) add_edge(g, EdgeKind::prerequisites_for, nid(a), nid(b));
        return g;
    };
    auto r1 = must_get(detect_cycles(build(false), EdgeKind::prerequisites_for));
    auto r2 = must_get(detect_cycles(build(true), EdgeKind::prerequisites_for));
    CHECK(r1.to_json() == r2.to_json());
}

TEST_CASE("resolutions remove, retarget, keep") {
    KnowledgeGraph g = concepts(3);
    add_edge(g, EdgeKind::prerequisites_for, nid(0), nid(1));
    add_edge(g, EdgeKind::prerequisites_for, nid(1), nid(0));

    SUBCASE("removing one edge clears the residual") {
        auto res = must_get(parse_resolutions(nlohmann::json::parse(R"([
          {"action": "remove",
           "edge": {"kind": "prerequisites_for", "source": "n101", "target": "n100"}}
        ])")));
        auto outcome = must_get(apply_resolutions(std::move(g), res));
        for (const auto& report : outcome.residual) CHECK(report.empty());
    }

    SUBCASE("retarget that creates a new cycle shows up in the residual") {
        auto res = must_get(parse_resolutions(nlohmann::json::parse(R"([
          {"action": "remove",
           "edge": {"kind": "prerequisites_for", "source": "n101", "target": "n100"}},
          {"action": "retarget", "new_target": "n100",
           "edge": {"kind": "prerequisites_for", "source": "n100", "target": "n101"}}
        ])")));
        // n100 -> n100 rejected as a self-loop retarget
        auto outcome = apply_resolutions(std::move(g), res);
        REQUIRE_FALSE(outcome.ok());
        CHECK(outcome.code() == Errc::invalid_retarget);
    }

    SUBCASE("keep leaves the cycle with a justification") {
        auto res = must_get(parse_resolutions(nlohmann::json::parse(R"([
          {"action": "keep", "justification": "intentionally mutual",
           "edge": {"kind": "prerequisites_for", "source": "n100", "target": "n101"}}
        ])")));
        auto outcome = must_get(apply_resolutions(std::move(g), res));
        bool saw = false;
        for (const auto& report : outcome.residual) {
            for (const auto& c : report.cycles) {
                if (!c.justification.empty()) saw = true;
            }
        }
        CHECK(saw);
    }

    SUBCASE("unknown edge is an error") {
        auto res = must_get(parse_resolutions(nlohmann::json::parse(R"([
          {"action": "remove",
           "edge": {"kind": "prerequisites_for", "source": "n100", "target": "n999"}}
        ])")));
        CHECK(apply_resolutions(std::move(g), res).code() == Errc::unknown_edge);
    }
}

TEST_CASE("retarget onto a fresh node re-detects new cycles") {
    KnowledgeGraph g = concepts(4);
    add_edge(g, EdgeKind::prerequisites_for, nid(0), nid(1));
    add_edge(g, EdgeKind::prerequisites_for, nid(1), nid(2));
    add_edge(g, EdgeKind::prerequisites_for, nid(2), nid(3));
    auto res = must_get(parse_resolutions(nlohmann::json::parse(R"([
      {"action": "retarget", "new_target": "n100",
       "edge": {"kind": "prerequisites_for", "source": "n102", "target": "n103"}}
    ])")));
    auto outcome = must_get(apply_resolutions(std::move(g), res));
    bool found = false;
    for (const auto& report : outcome.residual) {
        if (report.kind == EdgeKind::prerequisites_for) found = !report.cycles.empty();
    }
    CHECK(found);
}

TEST_CASE("certify demands acyclicity and full assembly") {
    using testsup::book_node;
    using testsup::chapter_node;
    using testsup::section_node;

    KnowledgeGraph g;
    must(g.add_node(book_node("bk", "physics", 1)));
    must(g.add_node(chapter_node("ch", "c", 1)));
    must(g.add_node(section_node("sec", "s", 1)));
    add_edge(g, EdgeKind::is_part_of, "ch", "bk");
    add_edge(g, EdgeKind::is_part_of, "sec", "ch");
    must(g.add_node(concept_node("c1", "alpha")));
    must(g.add_node(concept_node("c2", "beta")));
    add_edge(g, EdgeKind::appears_in, "c1", "sec");
    add_edge(g, EdgeKind::appears_in, "c2", "sec");
    add_edge(g, EdgeKind::prerequisites_for, "c1", "c2");

    SUBCASE("clean graph certifies with flags set") {
        auto outcome = certify(std::move(g));
        REQUIRE(outcome.certified);
        CHECK(outcome.graph.certified());
        CHECK(outcome.graph.dag_validated(EdgeKind::prerequisites_for));
        CHECK(outcome.graph.dag_validated(EdgeKind::is_a));
        CHECK(must_get(outcome.graph.prerequisite_closure("c2")) ==
              std::vector<std::string>{"c1"});
    }

    SUBCASE("unanchored content fails, naming the node") {
        must(g.add_node(concept_node("c3", "gamma")));
        auto outcome = certify(std::move(g));
        REQUIRE_FALSE(outcome.certified);
        bool names_node = false;
        for (const auto& v : outcome.violations) {
            if (v.find("c3") != std::string::npos) names_node = true;
        }
        CHECK(names_node);
    }

    SUBCASE("a prerequisite cycle fails, citing the cycle") {
        add_edge(g, EdgeKind::prerequisites_for, "c2", "c1");
        auto outcome = certify(std::move(g));
        REQUIRE_FALSE(outcome.certified);
        bool cites = false;
        for (const auto& v : outcome.violations) {
            if (v.find("cycle") != std::string::npos && v.find("c1") != std::string::npos) {
                cites = true;
            }
        }
        CHECK(cites);
    }
}

TEST_CASE("random DAGs with injected back-edges are always caught") {
    size_t trials = 120;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(hash_combine(31337, trial));
        size_t n = 10 + rng.below(60);
        KnowledgeGraph g = concepts(static_cast<int>(n));

        // topological order by index; forward edges only
        oracles::AdjList adj;
        std::set<std::string> node_set;
        for (size_t i = 0; i < n; ++i) node_set.insert(nid(static_cast<int>(i)));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (rng.below(100) < 8) {
                    add_edge(g, EdgeKind::prerequisites_for, nid(static_cast<int>(i)),
                             nid(static_cast<int>(j)));
                    adj[nid(static_cast<int>(i))].insert(nid(static_cast<int>(j)));
                }
            }
        }
        REQUIRE(oracles::kahn_is_dag(adj, node_set));
        CHECK(must_get(detect_cycles(g, EdgeKind::prerequisites_for)).empty());

        // inject 1-3 back-edges along existing forward paths
        size_t injected = 0;
        std::vector<std::pair<std::string, std::string>> back_edges;
        size_t want = 1 + rng.below(3);
        for (size_t attempt = 0; attempt < 200 && injected < want; ++attempt) {
            size_t i = rng.below(n);
            auto reach = oracles::reachable(adj, nid(static_cast<int>(i)));
            if (reach.empty()) continue;
            auto it = reach.begin();
            std::advance(it, rng.below(reach.size()));
            // earlier injections may have closed cycles through i already
            if (*it == nid(static_cast<int>(i))) continue;
            if (adj[*it].count(nid(static_cast<int>(i)))) continue;
            // back-edge *it -> i closes a cycle
            add_edge(g, EdgeKind::prerequisites_for, *it, nid(static_cast<int>(i)));
            back_edges.emplace_back(*it, nid(static_cast<int>(i)));
            adj[*it].insert(nid(static_cast<int>(i)));
            ++injected;
        }
        if (injected == 0) continue;

        auto report = must_get(detect_cycles(g, EdgeKind::prerequisites_for));
        CHECK_FALSE(report.empty());
        CHECK(report.cycles.size() >= report.scc_count); // witness per SCC

        // scripted removals restore acyclicity
        nlohmann::json res = nlohmann::json::array();
        for (const auto& [src, dst] : back_edges) {
            res.push_back({{"action", "remove"},
                           {"edge",
                            {{"kind", "prerequisites_for"}, {"source", src}, {"target", dst}}}});
        }
        auto outcome = must_get(apply_resolutions(std::move(g), must_get(parse_resolutions(res))));
        for (const auto& r : outcome.residual) CHECK(r.empty());
    }
}

TEST_CASE("acyclic verdict matches the Kahn oracle on random graphs") {
    for (uint64_t trial = 0; trial < 60; ++trial) {
        Rng rng(hash_combine(909, trial));
        size_t n = 5 + rng.below(25);
        KnowledgeGraph g = concepts(static_cast<int>(n));
        oracles::AdjList adj;
        std::set<std::string> node_set;
        for (size_t i = 0; i < n; ++i) node_set.insert(nid(static_cast<int>(i)));
        for (size_t e = 0; e < n * 2; ++e) {
            size_t a = rng.below(n), b = rng.below(n);
            if (a == b) continue;
            auto st = g.add_edge({EdgeKind::prerequisites_for, nid(static_cast<int>(a)),
                                  nid(static_cast<int>(b)), ""});
            if (st.ok()) adj[nid(static_cast<int>(a))].insert(nid(static_cast<int>(b)));
        }
        auto report = must_get(detect_cycles(g, EdgeKind::prerequisites_for));
        CHECK(report.empty() == oracles::kahn_is_dag(adj, node_set));
    }
}
