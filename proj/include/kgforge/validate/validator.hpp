#pragma once

#include <string>
#include <vector>

#include "kgforge/graph/graph.hpp"

namespace kgforge::validate {

// A directed cycle, stored closed: nodes[0] -> nodes[1] -> ... -> nodes[0].
// Canonical rotation: the lexicographically smallest node id comes first.
struct Cycle {
    std::vector<std::string> nodes;
    std::string justification; // set when a keep-resolution covers an edge of it
};

struct CycleReport {
    graph::EdgeKind kind = graph::EdgeKind::is_a;
    std::vector<Cycle> cycles;
    size_t scc_count = 0;   // strongly connected components with a cycle
    bool truncated = false; // enumeration hit the per-SCC cap

    bool empty() const { return cycles.empty(); }
    nlohmann::json to_json() const;
};

inline constexpr size_t kMaxCyclesPerScc = 10;

// Cycle detection for the two DAG-constrained subgraphs. Every SCC
// contributes at least one witness cycle, at most kMaxCyclesPerScc.
// Output is independent of adjacency iteration order.
Result<CycleReport> detect_cycles(const graph::KnowledgeGraph& g, graph::EdgeKind kind);

struct Resolution {
    enum class Action { remove, retarget, keep };
    Action action = Action::remove;
    graph::EdgeKind kind = graph::EdgeKind::prerequisites_for;
    std::string source;
    std::string target;
    std::string new_target;    // retarget only
    std::string justification; // required for keep
};

// resolutions.json: array of
//   {"action":"remove"|"retarget"|"keep",
//    "edge":{"kind","source","target"},"new_target"?,"justification"?}
Result<std::vector<Resolution>> parse_resolutions(const nlohmann::json& doc);

struct ResolutionOutcome {
    graph::KnowledgeGraph graph; // still unfrozen
    std::vector<CycleReport> residual; // one report per DAG-constrained kind
};

// Applies resolutions in file order, then re-runs detection. Cycles covered
// by a keep action stay in the residual report with the justification attached.
Result<ResolutionOutcome> apply_resolutions(graph::KnowledgeGraph graph,
                                            const std::vector<Resolution>& resolutions);

struct CertifyOutcome {
    bool certified = false;
    std::vector<std::string> violations;
    graph::KnowledgeGraph graph; // frozen, flags set, iff certified
};

// Succeeds iff is_a and prerequisites_for are acyclic and the assembly
// invariants hold; the result carries the frozen graph with its DAG
// validation flags and certification mark set.
CertifyOutcome certify(graph::KnowledgeGraph graph);

} // namespace kgforge::validate
