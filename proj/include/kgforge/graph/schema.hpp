#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "kgforge/core/error.hpp"

namespace kgforge::graph {

inline constexpr const char* kGraphSchemaVersion = "1";

enum class NodeKind : uint8_t {
    Book,
    Chapter,
    Section,
    Concept,
    Skill,
    Experiment,
    Exercise,
};
inline constexpr size_t kNodeKindCount = 7;

enum class EdgeKind : uint8_t {
    is_a,
    prerequisites_for,
    relates_to,
    verifies,
    tests_concept,
    tests_skill,
    appears_in,
    leads_to,
    is_part_of,
};
inline constexpr size_t kEdgeKindCount = 9;

const char* node_kind_name(NodeKind k);
const char* edge_kind_name(EdgeKind k);
std::optional<NodeKind> node_kind_from(std::string_view name);
std::optional<EdgeKind> edge_kind_from(std::string_view name);

constexpr std::array<NodeKind, kNodeKindCount> all_node_kinds() {
    return {NodeKind::Book,    NodeKind::Chapter,    NodeKind::Section, NodeKind::Concept,
            NodeKind::Skill,   NodeKind::Experiment, NodeKind::Exercise};
}

constexpr std::array<EdgeKind, kEdgeKindCount> all_edge_kinds() {
    return {EdgeKind::is_a,          EdgeKind::prerequisites_for, EdgeKind::relates_to,
            EdgeKind::verifies,      EdgeKind::tests_concept,     EdgeKind::tests_skill,
            EdgeKind::appears_in,    EdgeKind::leads_to,          EdgeKind::is_part_of};
}

inline bool is_content_kind(NodeKind k) {
    return k == NodeKind::Concept || k == NodeKind::Skill || k == NodeKind::Experiment ||
           k == NodeKind::Exercise;
}

// Allowed (source kind, target kind) pairs per edge kind.
// Exercise->Section is accepted for appears_in so exercises anchor like the
// other content kinds.
bool edge_kinds_allowed(EdgeKind edge, NodeKind source, NodeKind target);

// Kinds whose subgraphs must stay acyclic; self-loops rejected at insert.
inline bool is_acyclic_kind(EdgeKind k) {
    return k == EdgeKind::is_a || k == EdgeKind::prerequisites_for ||
           k == EdgeKind::relates_to || k == EdgeKind::leads_to;
}

// Kind-specific property checks. `props` must be a JSON object.
//
//   Concept     definition (non-empty), importance in {understand, master, important}
//   Skill       description (non-empty); generalizable, when present, must be true
//   Experiment  instruments (non-empty string or array), is_student in {0, 1}
//   Exercise    stem/answer/type (non-empty), integer difficulty in [1, 5]
//   Book        subject (non-empty), positive integer order
//   Chapter     positive integer order
//   Section     positive integer order
Status validate_props(NodeKind kind, const nlohmann::json& props);

} // namespace kgforge::graph
