#pragma once

#include <map>

#include "kgforge/graph/graph.hpp"
#include "kgforge/model/client.hpp"

namespace kgforge::synth {

inline constexpr const char* kQaTemplatesVersion = "1";

enum class SourceKind { node_grounded, edge_grounded, exercise_assessment };
const char* source_kind_name(SourceKind k);

// Subsampling pools are one level finer than the source kind: node-grounded
// records from Exercise nodes form their own pool.
//   "node"                 Concept/Skill/Experiment, LLM-prompted
//   "exercise"             Exercise nodes (stem + step-by-step answer), LLM-prompted
//   "edge"                 is_a/prerequisites_for/relates_to/verifies, LLM-prompted
//   "exercise_assessment"  tests_concept/tests_skill, deterministic templates
inline constexpr const char* kPoolNode = "node";
inline constexpr const char* kPoolExercise = "exercise";
inline constexpr const char* kPoolEdge = "edge";
inline constexpr const char* kPoolAssessment = "exercise_assessment";

struct QAPair {
    std::string question;
    std::string answer;
    SourceKind source = SourceKind::node_grounded;
    std::string pool; // one of the pool keys above
    std::vector<std::string> source_ids; // [node] or [source, kind, target]
    std::string subject;
    std::string prompt_hash; // hex; empty for deterministic templates
    std::string client_id;

    nlohmann::json to_json() const;
    static Result<QAPair> from_json(const nlohmann::json& doc);
};

enum class QaType { node, edge, exercise };

// Property whitelist per (kind, QA type); empty optional fields are dropped.
// importance (Concept) and is_student (Experiment) never reach a prompt.
nlohmann::json crop_properties(const graph::Node& node, QaType qa_type);

Result<std::string> render_node_prompt(const graph::KnowledgeGraph& g,
                                       const std::string& node_id, int n_pairs);

// Relation-anchored prompt; tests_concept/tests_skill go through the
// deterministic path instead and are rejected here.
Result<std::string> render_edge_prompt(const graph::KnowledgeGraph& g, const graph::Edge& edge,
                                       int n_pairs);

// Deterministic template fill for a tests_concept/tests_skill edge.
Result<QAPair> exercise_template_qa(const graph::KnowledgeGraph& g, const graph::Edge& edge);

// Structural check, non-emptiness, and question/answer script-class agreement.
Status validate_qa(const QAPair& pair);

// Uniform without-replacement per pool under the seed; a target larger than
// the pool takes everything (with a warning flag in the report). Output order
// is canonical: (source kind, source ids, question).
std::vector<QAPair> balanced_subsample(const std::map<std::string, std::vector<QAPair>>& pools,
                                       const std::map<std::string, size_t>& targets,
                                       uint64_t seed);

struct SynthConfig {
    uint64_t seed = 0;
    int pairs_per_prompt = 1;
    std::vector<std::string> paths = {"node", "edge", "exercise"};
    std::map<std::string, size_t> targets; // empty = keep everything
};

struct SynthReport {
    std::map<std::string, size_t> generated; // per pool
    std::map<std::string, size_t> kept;      // per pool after subsampling
    size_t client_failures = 0;
    size_t validation_failures = 0;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

struct SynthResult {
    std::vector<QAPair> pairs;
    SynthReport report;
};

Result<SynthResult> synthesize(const graph::KnowledgeGraph& g, model::ModelClient& client,
                               const SynthConfig& config);

} // namespace kgforge::synth
