#pragma once

#include <map>
#include <unordered_map>

#include "kgforge/bench/item.hpp"
#include "kgforge/bench/similarity.hpp"
#include "kgforge/bench/taskspec.hpp"
#include "kgforge/core/hash.hpp"
#include "kgforge/core/ngram.hpp"
#include "kgforge/model/client.hpp"

namespace kgforge::bench {

struct GoldMember {
    std::string node_id;
    std::string text;
    nlohmann::json edge; // witness relation for provenance
};

struct Candidate {
    std::string node_id;
    std::string text;
    double score = 0.0;
};

struct PoolLayer {
    std::string tag; // source rule of the layer
    std::vector<Candidate> candidates;
};

// Layered distractor candidates, near-to-far. A later layer is consulted
// only when the earlier ones leave the pool under the raw minimum.
struct CandidatePool {
    std::vector<PoolLayer> layers;

    size_t size() const;
    std::vector<Candidate> flattened() const; // layer order, then in-layer order
};

struct GenConfig {
    uint64_t seed = 0;
    size_t min_raw_pool = 8;   // escalation threshold (raw target lower bound)
    size_t max_raw_pool = 20;  // raw target upper bound
    size_t pool_floor = 3;     // fewer candidates after all layers drops the item
    double surface_threshold = 0.85;
    int judge_retries = 1;     // re-asks on an unparseable verdict
    std::vector<std::string> subtasks; // empty = all nine
};

struct SubtaskStats {
    size_t emitted = 0;
    std::map<int, size_t> k_histogram;
    std::map<std::string, size_t> combo_histogram; // "AC" -> count
    // feasible-cardinality set (rendered like "12" for {1,2}) -> chosen k ->
    // count; lets auditors bound how far feasibility constrained the balancer
    std::map<std::string, std::map<int, size_t>> feasibility;
};

struct GenerationReport {
    size_t emitted = 0;
    std::map<std::string, size_t> drops; // reason -> count
    std::map<std::string, SubtaskStats> per_subtask;
    bool similarity_degraded = false;

    nlohmann::json to_json() const;
};

struct GenerationResult {
    std::vector<BenchItem> items;
    GenerationReport report;
};

// Derives gold, builds/ranks/filters pools, balances cardinalities and label
// combinations, and assembles items. Deterministic for a fixed (graph, seed):
// per-item randomness is keyed by (seed, subtask, query id), and balancer
// state advances in canonical item-key order.
class Generator {
public:
    Generator(const graph::KnowledgeGraph& g, SimilarityProvider& similarity,
              model::ModelClient& judge, GenConfig config);

    Result<GenerationResult> generate();

    // individual stages, exposed for direct testing
    Result<std::vector<GoldMember>> derive_gold(const TaskSpec& spec, const std::string& query);
    Result<CandidatePool> build_candidate_pool(const TaskSpec& spec, const std::string& query,
                                               const std::vector<GoldMember>& gold, Rng& rng);
    void rank_candidates(CandidatePool& pool, const std::string& question,
                         const std::vector<GoldMember>& gold);
    void rule_filter(CandidatePool& pool, const TaskSpec& spec, const std::string& query,
                     const std::vector<GoldMember>& gold);
    void surface_dedup_filter(CandidatePool& pool, const std::vector<GoldMember>& gold);
    void pedagogical_filter(CandidatePool& pool, const std::string& question,
                            const std::vector<GoldMember>& gold);

    // balancing; state is per subtask (and per (subtask, k) for combos)
    Result<int> select_cardinality(const std::string& subtask, size_t gold_size,
                                   size_t pool_size);
    std::vector<std::string> assign_labels(const std::string& subtask, int k);

    static model::ChatRequest render_judge_prompt(const std::string& question,
                                                  const std::string& gold_answers,
                                                  const std::string& candidate);

private:
    std::vector<std::string> query_nodes(const TaskSpec& spec) const;
    Result<BenchItem> assemble_item(const TaskSpec& spec, const std::string& query);
    const GramVector& gram_of(const std::string& text);
    const std::string& norm_of(const std::string& text);
    double similarity(const std::string& a, const std::string& b);

    const graph::KnowledgeGraph& g_;
    SimilarityProvider& similarity_;
    model::ModelClient& judge_;
    GenConfig config_;
    bool builtin_similarity_ = false;
    GenerationReport report_;
    std::map<std::string, std::map<int, size_t>> k_used_;
    std::map<std::string, std::map<std::string, size_t>> combo_used_; // key: subtask|k
    std::unordered_map<std::string, GramVector> gram_cache_;
    std::unordered_map<std::string, std::string> norm_cache_;
};

} // namespace kgforge::bench
