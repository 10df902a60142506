#include <doctest.h>

#include "kgforge/fixture/synthetic.hpp"
#include "kgforge/synth/qa.hpp"
#include "test_support.hpp"

using namespace kgforge;
using namespace kgforge::synth;
using kgforge::graph::Edge;
using kgforge::graph::EdgeKind;
using testsup::must_get;

TEST_CASE("property cropping applies the per-kind whitelist") {
    auto g = testsup::curriculum_fixture();

    const auto* speed = g.find_node("c_speed");
    REQUIRE(speed != nullptr);
    auto cropped = crop_properties(*speed, QaType::node);
    CHECK(cropped.contains("definition"));
    CHECK_FALSE(cropped.contains("importance"));

    const auto* experiment = g.find_node("ex_freefall");
    REQUIRE(experiment != nullptr);
    auto exp_props = crop_properties(*experiment, QaType::node);
    CHECK(exp_props.contains("instruments"));
    CHECK_FALSE(exp_props.contains("is_student"));

    // empty optionals are omitted, not serialized as empty strings
    graph::Node with_empty = *speed;
    with_empty.props["formula"] = "";
    with_empty.props["examples"] = nlohmann::json::array();
    auto cropped2 = crop_properties(with_empty, QaType::node);
    CHECK_FALSE(cropped2.contains("formula"));
    CHECK_FALSE(cropped2.contains("examples"));
}

TEST_CASE("node prompts carry the kind-specific strategy") {
    auto g = testsup::curriculum_fixture();

    auto skill_prompt = must_get(render_node_prompt(g, "sk_graphing", 1));
    CHECK(skill_prompt.find("Skill-Oriented QA") != std::string::npos);
    CHECK(skill_prompt.find("plotting motion graphs") != std::string::npos);

    auto concept_prompt = must_get(render_node_prompt(g, "c_speed", 2));
    CHECK(concept_prompt.find("Concept-Oriented QA") != std::string::npos);
    CHECK(concept_prompt.find("synthesize 2 ") != std::string::npos);
    CHECK(concept_prompt.find("importance") == std::string::npos); // cropped away

    CHECK(render_node_prompt(g, "ch1", 1).code() == Errc::unsupported_kind);
}

TEST_CASE("edge prompts anchor the relation-specific goal") {
    auto g = testsup::curriculum_fixture();

    Edge prereq{EdgeKind::prerequisites_for, "c_speed", "c_velocity", ""};
    auto p = must_get(render_edge_prompt(g, prereq, 1));
    CHECK(p.find("why one should learn speed before velocity") != std::string::npos);

    Edge verifies{EdgeKind::verifies, "ex_freefall", "c_gravity", ""};
    auto v = must_get(render_edge_prompt(g, verifies, 1));
    CHECK(v.find("verified by free fall experiment") != std::string::npos);

    Edge tests{EdgeKind::tests_concept, "x1", "c_speed", ""};
    CHECK(render_edge_prompt(g, tests, 1).code() == Errc::unsupported_edge_kind);

    Edge part{EdgeKind::is_part_of, "s11", "ch1", ""};
    CHECK(render_edge_prompt(g, part, 1).code() == Errc::unsupported_edge_kind);
}

TEST_CASE("assessment edges fill deterministic templates") {
    auto g = testsup::curriculum_fixture();
    Edge e{EdgeKind::tests_concept, "x1", "c_speed", ""};

    auto pair = must_get(exercise_template_qa(g, e));
    CHECK(pair.answer.find("speed") != std::string::npos);
    CHECK(pair.question.find("100m in 5s") != std::string::npos);
    CHECK(pair.source == SourceKind::exercise_assessment);
    CHECK(pair.source_ids == std::vector<std::string>{"x1", "tests_concept", "c_speed"});

    auto pair2 = must_get(exercise_template_qa(g, e));
    CHECK(pair.to_json() == pair2.to_json()); // fully deterministic

    // an exercise with a blank stem cannot be templated
    graph::KnowledgeGraph g2 = testsup::build_curriculum_graph();
    auto n = testsup::exercise_node("x_blank", "placeholder");
    n.props["stem"] = " ";
    n.name = "placeholder";
    testsup::must(g2.add_node(n));
    testsup::add_edge(g2, EdgeKind::appears_in, "x_blank", "s11");
    testsup::add_edge(g2, EdgeKind::tests_concept, "x_blank", "c_speed");
    g2.freeze(graph::FreezeMode::partial);
    CHECK(exercise_template_qa(g2, {EdgeKind::tests_concept, "x_blank", "c_speed", ""}).code() ==
          Errc::missing_stem);
}

TEST_CASE("QA validation checks structure, emptiness, and script class") {
    QAPair ok;
    ok.question = "What is speed?";
    ok.answer = "Speed is distance over time.";
    CHECK(validate_qa(ok).ok());

    QAPair empty = ok;
    empty.answer = "   ";
    CHECK(validate_qa(empty).code() == Errc::empty_field);

    QAPair mixed = ok;
    mixed.answer = "速度是路程与时间之比。";
    CHECK(validate_qa(mixed).code() == Errc::language_mismatch);

    // digits and punctuation carry no script class
    QAPair numeric = ok;
    numeric.question = "1 + 1 = ?";
    CHECK(validate_qa(numeric).ok());

    CHECK(QAPair::from_json(nlohmann::json{{"question", "q"}}).code() == Errc::malformed);
    CHECK(QAPair::from_json(nlohmann::json{{"question", "q"}, {"answer", 3}}).code() ==
          Errc::malformed);
}

TEST_CASE("validation rejects any required-field deletion") {
    QAPair base;
    base.question = "What is mass?";
    base.answer = "Mass measures inertia.";
    nlohmann::json full = base.to_json();
    for (const char* field : {"question", "answer"}) {
        nlohmann::json mutated = full;
        mutated.erase(field);
        CHECK_FALSE(QAPair::from_json(mutated).ok());

        nlohmann::json blanked = full;
        blanked[field] = "";
        auto parsed = QAPair::from_json(blanked);
        REQUIRE(parsed.ok());
        CHECK(validate_qa(parsed.value()).code() == Errc::empty_field);
    }
}

TEST_CASE("balanced subsampling is seeded and respects targets") {
    std::map<std::string, std::vector<QAPair>> pools;
    for (int i = 0; i < 20; ++i) {
        QAPair p;
        p.question = "q" + std::to_string(i);
        p.answer = "a";
        p.pool = i < 12 ? kPoolNode : kPoolEdge;
        p.source = i < 12 ? SourceKind::node_grounded : SourceKind::edge_grounded;
        p.source_ids = {"n" + std::to_string(i)};
        pools[p.pool].push_back(p);
    }

    auto sample = balanced_subsample(pools, {{kPoolNode, 5}, {kPoolEdge, 3}}, 77);
    size_t nodes = 0, edges = 0;
    for (const auto& p : sample) {
        (p.pool == kPoolNode ? nodes : edges)++;
    }
    CHECK(nodes == 5);
    CHECK(edges == 3);

    auto again = balanced_subsample(pools, {{kPoolNode, 5}, {kPoolEdge, 3}}, 77);
    REQUIRE(again.size() == sample.size());
    for (size_t i = 0; i < sample.size(); ++i) CHECK(sample[i].question == again[i].question);

    auto excluded = balanced_subsample(pools, {{kPoolNode, 0}, {kPoolEdge, 3}}, 77);
    CHECK(excluded.size() == 3);

    auto overshoot = balanced_subsample(pools, {{kPoolNode, 99}, {kPoolEdge, 0}}, 77);
    CHECK(overshoot.size() == 12); // take-all
}

TEST_CASE("synthesize produces all four pools from the fixture graph") {
    auto g = testsup::curriculum_fixture();
    model::StubModelClient client(11, model::qa_stub_responder());
    SynthConfig config;
    config.seed = 5;

    auto result = must_get(synthesize(g, client, config));
    const auto& report = result.report;
    CHECK(report.generated.at(kPoolNode) > 0);
    CHECK(report.generated.at(kPoolExercise) > 0);
    CHECK(report.generated.at(kPoolEdge) > 0);
    // one deterministic pair per tests_* edge
    CHECK(report.generated.at(kPoolAssessment) == 5);

    std::set<std::string> seen_questions;
    for (const auto& p : result.pairs) {
        CHECK(validate_qa(p).ok());
        // every source id resolves in the graph (edge triples carry the kind in the middle)
        if (p.source_ids.size() == 3) {
            CHECK(g.has_node(p.source_ids[0]));
            CHECK(g.has_node(p.source_ids[2]));
        } else {
            REQUIRE(p.source_ids.size() == 1);
            CHECK(g.has_node(p.source_ids[0]));
        }
        if (p.pool == kPoolAssessment) {
            CHECK(seen_questions.insert(p.question + p.source_ids[2]).second);
        }
    }

    auto result2 = must_get(synthesize(g, client, config));
    REQUIRE(result2.pairs.size() == result.pairs.size());
    for (size_t i = 0; i < result.pairs.size(); ++i) {
        CHECK(result.pairs[i].to_json() == result2.pairs[i].to_json());
    }
}

TEST_CASE("synthesize honors path selection and targets") {
    auto g = testsup::curriculum_fixture();
    model::StubModelClient client(11, model::qa_stub_responder());

    SynthConfig only_exercise;
    only_exercise.paths = {"exercise"};
    auto result = must_get(synthesize(g, client, only_exercise));
    CHECK(result.report.generated.count(kPoolNode) == 0);
    CHECK(result.report.generated.at(kPoolAssessment) == 5);

    SynthConfig capped;
    capped.targets = {{kPoolAssessment, 2}, {kPoolNode, 3}, {kPoolEdge, 2}, {kPoolExercise, 1}};
    auto r2 = must_get(synthesize(g, client, capped));
    CHECK(r2.report.kept.at(kPoolAssessment) == 2);
    CHECK(r2.report.kept.at(kPoolNode) == 3);
    CHECK(r2.report.kept.at(kPoolEdge) == 2);
    CHECK(r2.report.kept.at(kPoolExercise) == 1);

    SynthConfig overshoot;
    overshoot.targets = {{kPoolAssessment, 500}};
    auto r3 = must_get(synthesize(g, client, overshoot));
    CHECK_FALSE(r3.report.warnings.empty());
}

TEST_CASE("subsampling reproduces the reference pool mix when pools suffice") {
    // full-scale synthetic corpus: every pool exceeds its target
    kgforge::fixture::FixtureConfig fx;
    fx.seed = 202;
    auto g = must_get(kgforge::fixture::build_certified_graph(fx));
    model::StubModelClient client(6, model::qa_stub_responder());
    SynthConfig config;
    config.seed = 12;
    config.targets = {{kPoolExercise, 450},
                      {kPoolAssessment, 356},
                      {kPoolNode, 695},
                      {kPoolEdge, 766}};
    auto result = must_get(synthesize(g, client, config));
    CHECK(result.report.kept.at(kPoolExercise) == 450);
    CHECK(result.report.kept.at(kPoolAssessment) == 356);
    CHECK(result.report.kept.at(kPoolNode) == 695);
    CHECK(result.report.kept.at(kPoolEdge) == 766);
    CHECK(result.pairs.size() == 450 + 356 + 695 + 766);
    CHECK(result.report.warnings.empty());
}

TEST_CASE("synthesis requires a certified graph") {
    graph::KnowledgeGraph g;
    testsup::must(g.add_node(testsup::concept_node("c1", "alone")));
    g.freeze(graph::FreezeMode::partial);
    model::StubModelClient client(0, model::qa_stub_responder());
    CHECK(synthesize(g, client, SynthConfig{}).code() == Errc::not_validated);
}
