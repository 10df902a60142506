#pragma once

#include <map>
#include <string>

#include "kgforge/bench/item.hpp"
#include "kgforge/graph/graph.hpp"

namespace kgforge::stats {

struct GraphStatsRow {
    size_t books = 0;
    size_t concepts = 0;
    size_t skills = 0;
    size_t experiments = 0;
    size_t exercises = 0;
    size_t is_a = 0;
    size_t prerequisites_for = 0;
    size_t relates_to = 0;
    size_t verifies = 0;
    size_t tests_concept = 0;
    size_t tests_skill = 0;
    size_t leads_to = 0; // within-subject links only in subject rows
};

struct GraphStats {
    std::map<std::string, GraphStatsRow> by_subject;
    GraphStatsRow total; // leads_to here is the global count incl. cross-subject

    nlohmann::json to_json() const;
    std::string to_text() const; // aligned columns for eyeballing
};

// Composition counts per subject over content nodes and the seven reported
// edge kinds. Cross-subject leads_to edges land in the total row only.
GraphStats graph_stats(const graph::KnowledgeGraph& g);

struct BenchStats {
    std::map<std::string, std::map<std::string, size_t>> by_family_subject;
    std::map<std::string, std::map<int, size_t>> k_by_subtask;
    size_t items = 0;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

// Parses and checks every line; a malformed record is an error, not a skip.
Result<BenchStats> bench_stats(const std::vector<nlohmann::json>& lines);

} // namespace kgforge::stats
