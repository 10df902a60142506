#pragma once

#include <filesystem>

#include "kgforge/graph/graph.hpp"
#include "kgforge/ingest/manifest.hpp"

namespace kgforge::fixture {

// Seeded synthetic curriculum corpus. Same-subject concept/skill names are
// reused across sections at the given rate so the merge passes have real
// dedup work, and all taxonomic/prerequisite edges follow a global name rank
// so the merged subgraphs stay acyclic.
struct FixtureConfig {
    uint64_t seed = 0;
    std::vector<std::string> subjects = {"biology", "chemistry", "mathematics", "physics"};
    int books_per_subject = 3;
    int chapters_per_book = 6;
    int sections_per_chapter = 5;
    int concepts_per_section = 10;
    int skills_per_section = 2;
    int exercises_per_section = 2;
    int experiments_per_section = 1; // skipped for mathematics
    double name_reuse_rate = 0.08;
};

struct CorpusPaths {
    std::vector<std::filesystem::path> manifests; // one per book
    std::filesystem::path extra_edges;            // cross-book leads_to links
};

// Writes manifests + per-section extraction documents + extra_edges.json
// under `dir`, ready for the ingest -> merge -> validate pipeline.
Result<CorpusPaths> write_corpus(const FixtureConfig& config,
                                 const std::filesystem::path& dir);

// Runs the in-memory equivalent of the pipeline over the same synthetic
// content: section graphs -> book merges -> subject merges -> union ->
// certification.
Result<graph::KnowledgeGraph> build_certified_graph(const FixtureConfig& config);

} // namespace kgforge::fixture
