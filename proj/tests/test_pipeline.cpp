#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kgforge/core/jsonl.hpp"
#include "kgforge/fixture/synthetic.hpp"
#include "kgforge/pipeline/pipeline.hpp"
#include "test_support.hpp"

using namespace kgforge;
namespace fs = std::filesystem;

namespace {

fixture::FixtureConfig small_fixture(uint64_t seed) {
    fixture::FixtureConfig config;
    config.seed = seed;
    config.subjects = {"mathematics", "physics"};
    config.books_per_subject = 2;
    config.chapters_per_book = 2;
    config.sections_per_chapter = 2;
    config.concepts_per_section = 6;
    return config;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("kgforge_test_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

pipeline::PipelineConfig config_for(const fs::path& corpus_dir, const fs::path& workdir,
                                    const fixture::CorpusPaths& paths, uint64_t seed) {
    pipeline::PipelineConfig config;
    config.seed = seed;
    config.workdir = workdir;
    config.manifests = paths.manifests;
    config.extra_edges = paths.extra_edges;
    (void)corpus_dir;
    return config;
}

std::string slurp(const fs::path& p) {
    auto r = jsonl::read_text_file(p);
    REQUIRE(r.ok());
    return r.value();
}

} // namespace

TEST_CASE("synthetic corpus certifies at small scale") {
    auto g = testsup::must_get(fixture::build_certified_graph(small_fixture(3)));
    CHECK(g.certified());
    CHECK(g.node_count() > 100);
    // both subjects present, all nine edge kinds except none missing structurally
    CHECK_FALSE(g.node_ids_of_kind(graph::NodeKind::Exercise).empty());
    CHECK(g.count_edges_of_kind(graph::EdgeKind::leads_to) > 0);
    // mathematics carries no experiments
    for (const auto& id : g.node_ids_of_kind(graph::NodeKind::Experiment)) {
        CHECK(g.node_subject(id).value_or("") != "mathematics");
    }
}

TEST_CASE("pipeline runs, resumes, and recovers from corruption") {
    TempDir tmp("pipeline");
    auto paths = testsup::must_get(fixture::write_corpus(small_fixture(11), tmp.path / "corpus"));
    auto config = config_for(tmp.path / "corpus", tmp.path / "out", paths, 99);

    auto first = testsup::must_get(pipeline::run_pipeline(config));
    CHECK(fs::exists(first.bench_jsonl));
    CHECK(fs::exists(first.train_jsonl));
    CHECK(fs::exists(first.certified_graph));
    CHECK(fs::exists(first.run_manifest));
    for (const auto& stage : first.stages) CHECK_FALSE(stage.skipped);

    auto second = testsup::must_get(pipeline::run_pipeline(config));
    for (const auto& stage : second.stages) {
        CHECK_MESSAGE(stage.skipped, "stage should skip: " << stage.name);
    }

    // corrupting an intermediate forces that stage (and only its dependents
    // whose inputs changed) to run again
    {
        std::ofstream out(first.certified_graph, std::ios::trunc);
        out << "{}";
    }
    auto third = testsup::must_get(pipeline::run_pipeline(config));
    bool validate_ran = false;
    for (const auto& stage : third.stages) {
        if (stage.name == "validate") validate_ran = !stage.skipped;
    }
    CHECK(validate_ran);
    CHECK(slurp(first.certified_graph).size() > 2);
}

TEST_CASE("pipeline output is byte-identical for a fixed seed") {
    TempDir tmp("determinism");
    auto paths = testsup::must_get(fixture::write_corpus(small_fixture(5), tmp.path / "corpus"));

    auto run_a = testsup::must_get(
        pipeline::run_pipeline(config_for(tmp.path / "corpus", tmp.path / "a", paths, 1234)));
    auto run_b = testsup::must_get(
        pipeline::run_pipeline(config_for(tmp.path / "corpus", tmp.path / "b", paths, 1234)));
    CHECK(slurp(run_a.bench_jsonl) == slurp(run_b.bench_jsonl));
    CHECK(slurp(run_a.train_jsonl) == slurp(run_b.train_jsonl));

    auto run_c = testsup::must_get(
        pipeline::run_pipeline(config_for(tmp.path / "corpus", tmp.path / "c", paths, 4321)));
    CHECK(slurp(run_a.bench_jsonl) != slurp(run_c.bench_jsonl));
}

TEST_CASE("pipeline config round-trips through JSON with flag-style overrides") {
    pipeline::PipelineConfig config;
    config.seed = 7;
    config.manifests = {"books/a/manifest.json"};
    config.targets = {{"node", 10}};
    auto doc = config.to_json();
    auto parsed = pipeline::PipelineConfig::from_json(doc, "/base");
    REQUIRE(parsed.ok());
    CHECK(parsed.value().seed == 7);
    CHECK(parsed.value().targets.at("node") == 10);
    CHECK(parsed.value().manifests[0].string().find("/base/") == 0);

    CHECK(pipeline::PipelineConfig::from_json(nlohmann::json::array(), ".").code() ==
          Errc::config_error);
    CHECK(pipeline::PipelineConfig::from_json(nlohmann::json{{"version", 1}}, ".").code() ==
          Errc::config_error); // no manifests
}
