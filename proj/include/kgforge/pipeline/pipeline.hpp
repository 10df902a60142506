#pragma once

#include <filesystem>
#include <map>

#include "kgforge/core/error.hpp"

#include <json.hpp>

namespace kgforge::pipeline {

inline constexpr int kConfigVersion = 1;

// One document holds every knob; CLI flags override individual fields.
struct PipelineConfig {
    uint64_t seed = 0;
    std::filesystem::path workdir = "out";
    std::vector<std::filesystem::path> manifests; // per-book sections_index.json
    std::filesystem::path extra_edges; // optional corpus-level edge file
    std::filesystem::path aliases;     // optional per-subject alias file
    std::filesystem::path resolutions; // optional cycle resolutions

    std::string judge = "stub";
    std::string judge_endpoint;
    std::string similarity = "ngram";
    std::string similarity_endpoint;
    std::vector<std::string> tasks; // empty = all nine subtasks

    std::string client = "stub";
    std::string client_endpoint;
    std::string model = "stub";
    std::vector<std::string> paths = {"node", "edge", "exercise"};
    std::map<std::string, size_t> targets;
    int pairs_per_prompt = 1;
    double surface_threshold = 0.85;

    static Result<PipelineConfig> from_json(const nlohmann::json& doc,
                                            const std::filesystem::path& base_dir);
    nlohmann::json to_json() const;
};

struct StageRecord {
    std::string name;
    bool skipped = false;
    std::string input_hash;
    std::map<std::string, std::string> outputs; // path -> content hash
};

struct PipelineOutcome {
    std::vector<StageRecord> stages;
    std::filesystem::path certified_graph;
    std::filesystem::path bench_jsonl;
    std::filesystem::path train_jsonl;
    std::filesystem::path run_manifest;
};

// ingest -> book merges -> subject merges -> union -> validate -> benchgen +
// synth -> stats. Each stage hashes its inputs (file bytes + parameters +
// stage seed) and is skipped when the hash and all recorded outputs still
// match; the master seed fans out per stage. Any stage failure aborts the run.
Result<PipelineOutcome> run_pipeline(const PipelineConfig& config);

} // namespace kgforge::pipeline
