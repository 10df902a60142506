#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kgforge/graph/graph.hpp"

namespace kgforge::merge {

// Light normalization for name matching: trim, ASCII case-fold, full-width
// to half-width, internal whitespace collapsed, surrounding punctuation
// stripped. Internal punctuation is kept.
std::string normalize_name(std::string_view raw);

struct MergeGroup {
    std::string canonical_id;
    std::string canonical_name;
    std::vector<std::string> merged_ids;   // excludes the canonical
    std::vector<std::string> merged_names; // raw names of merged-away nodes
};

struct PropertyConflict {
    std::string canonical_id;
    std::string field;
    nlohmann::json kept;
    nlohmann::json alternate;
    std::string alternate_from; // merged-away node id
};

struct ReviewCandidate {
    std::string id_a;
    std::string id_b;
    double name_similarity = 0.0;
};

struct MergeReport {
    size_t nodes_in = 0;
    size_t nodes_out = 0;
    size_t edges_in = 0;
    size_t edges_out = 0;
    size_t merged_groups = 0;
    size_t self_loops_dropped = 0;
    std::vector<MergeGroup> alias_table;
    std::vector<PropertyConflict> conflicts;
    std::vector<ReviewCandidate> review_candidates; // near-miss names, not merged

    nlohmann::json to_json() const;
};

struct AliasEntry {
    std::string canonical;
    std::vector<std::string> aliases;
};

// Alias file: JSON array of {"canonical": name, "aliases": [name, ...]}.
Result<std::vector<AliasEntry>> parse_alias_file(const nlohmann::json& doc);

struct MergeResult {
    graph::KnowledgeGraph graph; // unfrozen
    MergeReport report;
};

// Section fragments of one book -> book graph. Concepts and Skills merge on
// equal normalized names (same kind only); Experiments and Exercises never
// name-merge. Content nodes get ids of the form
// <book id>/<kind>/<counter>, counted in curriculum order; ids already in
// that form pass through untouched, which makes the pass idempotent.
Result<MergeResult> merge_book(const std::vector<graph::KnowledgeGraph>& fragments);

// Book graphs of one subject -> subject graph. Same dedup rule across books;
// only exact normalized matches (or alias-file entries) merge automatically,
// near-miss names are listed for review. The canonical occurrence keeps its id.
Result<MergeResult> merge_subject(const std::vector<graph::KnowledgeGraph>& books,
                                  const std::vector<AliasEntry>& aliases = {});

// Disjoint union of per-subject graphs plus optional cross-graph edges
// (e.g. chapter-level leads_to links spanning subjects). No deduplication.
Result<MergeResult> merge_union(const std::vector<graph::KnowledgeGraph>& graphs,
                                const std::vector<graph::Edge>& extra_edges = {});

} // namespace kgforge::merge
