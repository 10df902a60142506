#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgforge/graph/schema.hpp"

namespace kgforge::graph {

struct Provenance {
    std::string book_id;
    std::string section_id;

    bool operator==(const Provenance&) const = default;
};

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Concept;
    std::string name;
    nlohmann::json props = nlohmann::json::object();
    std::optional<Provenance> provenance;
};

struct Edge {
    EdgeKind kind = EdgeKind::relates_to;
    std::string source;
    std::string target;
    std::string evidence; // empty means none

    bool operator==(const Edge&) const = default;
};

struct Violation {
    std::string where; // node or edge description
    std::string what;
};

enum class FreezeMode {
    require_assembly, // refuse to freeze unless hierarchy + anchoring hold
    partial,          // freeze anyway, violations recorded
};

enum class Direction { out, in, both };
enum class SiblingVia { is_a_parent, shared_prereq_target };
enum class Scope { section, chapter, book, subject_stage, subject };

const char* scope_name(Scope s);
std::optional<Scope> scope_from(std::string_view name);

struct FirstAppearance {
    std::string section_id;
    std::string chapter_id;
};

struct BookMeta {
    std::string subject;
    std::string stage; // may be empty
    int64_t order = 0;
};

// Typed property graph with per-kind adjacency indexes.
//
// Lifecycle: mutate while building, then freeze(). Traversal queries are
// only answered on a frozen graph; freeze builds the structural and scope
// indexes and checks the assembly invariants (every Section in exactly one
// Chapter, every Chapter in exactly one Book, every content node anchored).
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // --- construction ------------------------------------------------------

    Status add_node(Node node);
    Status add_edge(Edge edge);

    // Removes every edge matching (kind, source, target). Building state only.
    Result<size_t> remove_edges(EdgeKind kind, const std::string& source,
                                const std::string& target);

    // Runs assembly checks and builds the query indexes. Returns the
    // violation list; empty on a fully assembled graph. Under
    // require_assembly a non-empty list leaves the graph mutable.
    std::vector<Violation> freeze(FreezeMode mode = FreezeMode::require_assembly);

    bool frozen() const { return frozen_; }
    const std::vector<Violation>& assembly_violations() const { return assembly_violations_; }

    // Caller attests that the subgraph of `kind` has been checked acyclic.
    void mark_dag_validated(EdgeKind kind) { dag_validated_.insert(kind); }
    bool dag_validated(EdgeKind kind) const { return dag_validated_.count(kind) > 0; }

    void set_certified(bool v) { certified_ = v; }
    bool certified() const { return certified_; }

    // --- lookups -----------------------------------------------------------

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
    const Node* find_node(const std::string& id) const;
    size_t node_count() const { return nodes_.size(); }
    size_t edge_count() const { return edges_.size(); }
    const std::map<std::string, Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::vector<std::string> node_ids_of_kind(NodeKind kind) const;
    size_t count_edges_of_kind(EdgeKind kind) const;

    // --- queries (frozen graph) --------------------------------------------

    Result<std::vector<std::string>> neighbors(const std::string& id, EdgeKind kind,
                                               Direction dir) const;

    // Hops over the undirected union of relates_to, is_a, prerequisites_for.
    Result<std::optional<int>> structural_distance(const std::string& a,
                                                   const std::string& b) const;

    Result<std::vector<std::string>> k_hop_ring(const std::string& id, int k) const;

    // All transitive predecessors under prerequisites_for. Requires the
    // prerequisites_for subgraph to have been validated acyclic.
    Result<std::vector<std::string>> prerequisite_closure(const std::string& id) const;

    // Out-neighbors in the transitive reduction of the prerequisites_for DAG:
    // a one-hop successor is dropped when it is also reachable through a
    // longer prerequisites_for path from the same node.
    Result<std::vector<std::string>> direct_successors(const std::string& id) const;

    Result<std::vector<std::string>> siblings(const std::string& id, SiblingVia via) const;

    Result<std::vector<std::string>> scope_pool(const std::string& id, Scope scope,
                                                const std::set<NodeKind>& filter) const;

    Result<FirstAppearance> first_appearance(const std::string& id) const;

    // --- scope helpers -----------------------------------------------------

    std::vector<std::string> anchor_sections(const std::string& id) const;
    std::optional<std::string> section_chapter(const std::string& section_id) const;
    std::optional<std::string> chapter_book(const std::string& chapter_id) const;
    std::optional<BookMeta> book_meta(const std::string& book_id) const;

    // Subject / stage a node belongs to, resolved through its earliest anchor
    // (containers resolve through the hierarchy directly).
    std::optional<std::string> node_subject(const std::string& id) const;
    std::optional<std::string> node_stage(const std::string& id) const;

    // (book order, chapter order, section order, section id) for sorting.
    std::optional<std::tuple<int64_t, int64_t, int64_t, std::string>>
    curriculum_pos(const std::string& section_id) const;

    // Structural union neighbors (sorted). Frozen graph only.
    const std::vector<std::string>& structural_neighbors(const std::string& id) const;

private:
    Status ensure_frozen() const;
    Status ensure_node(const std::string& id) const;
    void build_indexes();
    std::vector<std::string> containers_at(const std::string& id, Scope scope) const;

    std::map<std::string, Node> nodes_;
    std::vector<Edge> edges_;
    std::array<std::unordered_map<std::string, std::vector<uint32_t>>, kEdgeKindCount> out_;
    std::array<std::unordered_map<std::string, std::vector<uint32_t>>, kEdgeKindCount> in_;

    bool frozen_ = false;
    bool certified_ = false;
    std::set<EdgeKind> dag_validated_;
    std::vector<Violation> assembly_violations_;

    // built at freeze
    std::unordered_map<std::string, std::vector<std::string>> structural_adj_;
    std::unordered_map<std::string, std::vector<std::string>> node_anchors_; // node -> sections
    std::unordered_map<std::string, std::string> section_chapter_;
    std::unordered_map<std::string, std::string> chapter_book_;
    std::unordered_map<std::string, BookMeta> book_meta_;
    // scope level -> container key -> member node ids (sorted)
    std::array<std::map<std::string, std::vector<std::string>>, 5> scope_members_;
};

} // namespace kgforge::graph
