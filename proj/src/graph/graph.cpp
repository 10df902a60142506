#include "kgforge/graph/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

namespace kgforge::graph {

namespace {

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

const char* scope_name(Scope s) {
    switch (s) {
        case Scope::section: return "section";
        case Scope::chapter: return "chapter";
        case Scope::book: return "book";
        case Scope::subject_stage: return "subject_stage";
        case Scope::subject: return "subject";
    }
    return "?";
}

std::optional<Scope> scope_from(std::string_view name) {
    for (Scope s : {Scope::section, Scope::chapter, Scope::book, Scope::subject_stage,
                    Scope::subject}) {
        if (name == scope_name(s)) return s;
    }
    return std::nullopt;
}

const Node* KnowledgeGraph::find_node(const std::string& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

Status KnowledgeGraph::add_node(Node node) {
    if (frozen_) return make_error(Errc::frozen, "graph is frozen");
    if (node.id.empty()) return make_error(Errc::schema_violation, "node id empty");
    if (nodes_.count(node.id)) {
        return make_error(Errc::duplicate_id, "node '" + node.id + "' already present");
    }
    if (node.name.empty()) {
        return make_error(Errc::schema_violation, "node '" + node.id + "' has empty name");
    }
    if (auto st = validate_props(node.kind, node.props); !st.ok()) {
        return make_error(Errc::schema_violation,
                          "node '" + node.id + "': " + st.error().message);
    }
    nodes_.emplace(node.id, std::move(node));
    return Status::success();
}

Status KnowledgeGraph::add_edge(Edge edge) {
    if (frozen_) return make_error(Errc::frozen, "graph is frozen");
    const Node* src = find_node(edge.source);
    const Node* dst = find_node(edge.target);
    if (!src || !dst) {
        return make_error(Errc::dangling_endpoint,
                          std::string(edge_kind_name(edge.kind)) + " edge endpoint missing: " +
                              (src ? edge.target : edge.source));
    }
    if (!edge_kinds_allowed(edge.kind, src->kind, dst->kind)) {
        return make_error(Errc::kind_violation,
                          std::string(edge_kind_name(edge.kind)) + " cannot connect " +
                              node_kind_name(src->kind) + " -> " + node_kind_name(dst->kind));
    }
    if (edge.source == edge.target && is_acyclic_kind(edge.kind)) {
        return make_error(Errc::self_loop, std::string(edge_kind_name(edge.kind)) +
                                               " self-loop on '" + edge.source + "'");
    }
    edges_.push_back(std::move(edge));
    return Status::success();
}

Result<size_t> KnowledgeGraph::remove_edges(EdgeKind kind, const std::string& source,
                                            const std::string& target) {
    if (frozen_) return Error{Errc::frozen, "graph is frozen"};
    size_t before = edges_.size();
    std::erase_if(edges_, [&](const Edge& e) {
        return e.kind == kind && e.source == source && e.target == target;
    });
    return before - edges_.size();
}

void KnowledgeGraph::build_indexes() {
    for (auto& m : out_) m.clear();
    for (auto& m : in_) m.clear();
    structural_adj_.clear();
    node_anchors_.clear();
    section_chapter_.clear();
    chapter_book_.clear();
    book_meta_.clear();
    for (auto& m : scope_members_) m.clear();

    for (uint32_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        size_t k = static_cast<size_t>(e.kind);
        out_[k][e.source].push_back(i);
        in_[k][e.target].push_back(i);
    }

    // undirected union of relates_to, is_a, prerequisites_for
    for (const Edge& e : edges_) {
        if (e.kind == EdgeKind::relates_to || e.kind == EdgeKind::is_a ||
            e.kind == EdgeKind::prerequisites_for) {
            structural_adj_[e.source].push_back(e.target);
            structural_adj_[e.target].push_back(e.source);
        }
    }
    for (auto& [id, adj] : structural_adj_) sort_unique(adj);

    for (const Edge& e : edges_) {
        if (e.kind == EdgeKind::appears_in) {
            node_anchors_[e.source].push_back(e.target);
        } else if (e.kind == EdgeKind::is_part_of) {
            const Node* src = find_node(e.source);
            if (src && src->kind == NodeKind::Section) {
                section_chapter_.emplace(e.source, e.target);
            } else if (src && src->kind == NodeKind::Chapter) {
                chapter_book_.emplace(e.source, e.target);
            }
        }
    }
    for (auto& [id, anchors] : node_anchors_) sort_unique(anchors);

    for (const auto& [id, node] : nodes_) {
        if (node.kind != NodeKind::Book) continue;
        BookMeta meta;
        if (auto it = node.props.find("subject"); it != node.props.end() && it->is_string()) {
            meta.subject = it->get<std::string>();
        }
        if (auto it = node.props.find("stage"); it != node.props.end() && it->is_string()) {
            meta.stage = it->get<std::string>();
        }
        if (auto it = node.props.find("order"); it != node.props.end() && it->is_number_integer()) {
            meta.order = it->get<int64_t>();
        }
        book_meta_.emplace(id, std::move(meta));
    }

    for (const auto& [id, node] : nodes_) {
        (void)node;
        for (Scope scope : {Scope::section, Scope::chapter, Scope::book, Scope::subject_stage,
                            Scope::subject}) {
            for (const std::string& key : containers_at(id, scope)) {
                scope_members_[static_cast<size_t>(scope)][key].push_back(id);
            }
        }
    }
    for (auto& level : scope_members_) {
        for (auto& [key, members] : level) sort_unique(members);
    }
}

std::vector<std::string> KnowledgeGraph::containers_at(const std::string& id, Scope scope) const {
    const Node* node = find_node(id);
    if (!node) return {};

    std::vector<std::string> sections;
    if (node->kind == NodeKind::Section) {
        sections.push_back(id);
    } else if (is_content_kind(node->kind)) {
        if (auto it = node_anchors_.find(id); it != node_anchors_.end()) sections = it->second;
    }

    auto chapters_of = [&](const std::vector<std::string>& secs) {
        std::vector<std::string> out;
        for (const auto& s : secs) {
            if (auto it = section_chapter_.find(s); it != section_chapter_.end()) {
                out.push_back(it->second);
            }
        }
        return out;
    };

    std::vector<std::string> chapters;
    if (node->kind == NodeKind::Chapter) {
        chapters.push_back(id);
    } else {
        chapters = chapters_of(sections);
    }

    std::vector<std::string> books;
    if (node->kind == NodeKind::Book) {
        books.push_back(id);
    } else {
        for (const auto& c : chapters) {
            if (auto it = chapter_book_.find(c); it != chapter_book_.end()) {
                books.push_back(it->second);
            }
        }
    }

    std::vector<std::string> out;
    switch (scope) {
        case Scope::section: out = sections; break;
        case Scope::chapter: out = chapters; break;
        case Scope::book: out = books; break;
        case Scope::subject_stage:
            for (const auto& b : books) {
                if (auto it = book_meta_.find(b); it != book_meta_.end()) {
                    out.push_back(it->second.subject + "|" + it->second.stage);
                }
            }
            break;
        case Scope::subject:
            for (const auto& b : books) {
                if (auto it = book_meta_.find(b); it != book_meta_.end()) {
                    out.push_back(it->second.subject);
                }
            }
            break;
    }
    sort_unique(out);
    return out;
}

std::vector<Violation> KnowledgeGraph::freeze(FreezeMode mode) {
    if (frozen_) return assembly_violations_;
    build_indexes();

    // assembly checks use the fresh indexes where possible
    std::vector<Violation> violations;
    for (const auto& [id, node] : nodes_) {
        if (node.kind == NodeKind::Section || node.kind == NodeKind::Chapter) {
            std::set<std::string> parents;
            if (auto it = out_[static_cast<size_t>(EdgeKind::is_part_of)].find(id);
                it != out_[static_cast<size_t>(EdgeKind::is_part_of)].end()) {
                for (uint32_t ei : it->second) parents.insert(edges_[ei].target);
            }
            if (parents.size() != 1) {
                violations.push_back({id, std::string(node_kind_name(node.kind)) + " has " +
                                              std::to_string(parents.size()) +
                                              " is_part_of parents, expected exactly 1"});
            }
        } else if (is_content_kind(node.kind)) {
            if (!node_anchors_.count(id)) {
                violations.push_back({id, std::string(node_kind_name(node.kind)) +
                                              " has no appears_in anchor"});
            }
        }
    }

    assembly_violations_ = violations;
    if (violations.empty() || mode == FreezeMode::partial) {
        frozen_ = true;
    }
    return violations;
}

Status KnowledgeGraph::ensure_frozen() const {
    if (!frozen_) return make_error(Errc::not_frozen, "graph must be frozen before querying");
    return Status::success();
}

Status KnowledgeGraph::ensure_node(const std::string& id) const {
    if (!has_node(id)) return make_error(Errc::unknown_node, "no node '" + id + "'");
    return Status::success();
}

std::vector<std::string> KnowledgeGraph::node_ids_of_kind(NodeKind kind) const {
    std::vector<std::string> out;
    for (const auto& [id, node] : nodes_) {
        if (node.kind == kind) out.push_back(id);
    }
    return out; // map iteration is already sorted
}

size_t KnowledgeGraph::count_edges_of_kind(EdgeKind kind) const {
    size_t n = 0;
    for (const Edge& e : edges_) {
        if (e.kind == kind) ++n;
    }
    return n;
}

Result<std::vector<std::string>> KnowledgeGraph::neighbors(const std::string& id, EdgeKind kind,
                                                           Direction dir) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    std::vector<std::string> out;
    size_t k = static_cast<size_t>(kind);
    if (dir == Direction::out || dir == Direction::both) {
        if (auto it = out_[k].find(id); it != out_[k].end()) {
            for (uint32_t ei : it->second) out.push_back(edges_[ei].target);
        }
    }
    if (dir == Direction::in || dir == Direction::both) {
        if (auto it = in_[k].find(id); it != in_[k].end()) {
            for (uint32_t ei : it->second) out.push_back(edges_[ei].source);
        }
    }
    sort_unique(out);
    return out;
}

const std::vector<std::string>& KnowledgeGraph::structural_neighbors(const std::string& id) const {
    static const std::vector<std::string> empty;
    auto it = structural_adj_.find(id);
    return it == structural_adj_.end() ? empty : it->second;
}

Result<std::optional<int>> KnowledgeGraph::structural_distance(const std::string& a,
                                                               const std::string& b) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(a); !st.ok()) return st.error();
    if (auto st = ensure_node(b); !st.ok()) return st.error();
    if (a == b) return std::optional<int>(0);

    std::unordered_map<std::string, int> dist;
    std::deque<std::string> queue;
    dist[a] = 0;
    queue.push_back(a);
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        int d = dist[cur];
        for (const std::string& next : structural_neighbors(cur)) {
            if (dist.count(next)) continue;
            if (next == b) return std::optional<int>(d + 1);
            dist[next] = d + 1;
            queue.push_back(next);
        }
    }
    return std::optional<int>(std::nullopt);
}

Result<std::vector<std::string>> KnowledgeGraph::k_hop_ring(const std::string& id, int k) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    if (k < 1) return Error{Errc::schema_violation, "k must be >= 1"};

    std::unordered_map<std::string, int> dist;
    std::deque<std::string> queue;
    dist[id] = 0;
    queue.push_back(id);
    std::vector<std::string> ring;
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        int d = dist[cur];
        if (d >= k) continue;
        for (const std::string& next : structural_neighbors(cur)) {
            if (dist.count(next)) continue;
            dist[next] = d + 1;
            if (d + 1 == k) {
                ring.push_back(next);
            } else {
                queue.push_back(next);
            }
        }
    }
    sort_unique(ring);
    return ring;
}

Result<std::vector<std::string>> KnowledgeGraph::prerequisite_closure(const std::string& id) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    if (!dag_validated(EdgeKind::prerequisites_for)) {
        return Error{Errc::not_validated, "prerequisites_for subgraph not validated acyclic"};
    }
    const auto& rev = in_[static_cast<size_t>(EdgeKind::prerequisites_for)];
    std::vector<std::string> out;
    std::unordered_set<std::string> seen{id};
    std::vector<std::string> stack{id};
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (auto it = rev.find(cur); it != rev.end()) {
            for (uint32_t ei : it->second) {
                const std::string& pred = edges_[ei].source;
                if (seen.insert(pred).second) {
                    out.push_back(pred);
                    stack.push_back(pred);
                }
            }
        }
    }
    sort_unique(out);
    return out;
}

Result<std::vector<std::string>> KnowledgeGraph::direct_successors(const std::string& id) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    const auto& fwd = out_[static_cast<size_t>(EdgeKind::prerequisites_for)];

    std::vector<std::string> direct;
    if (auto it = fwd.find(id); it != fwd.end()) {
        for (uint32_t ei : it->second) direct.push_back(edges_[ei].target);
    }
    sort_unique(direct);
    if (direct.empty()) return direct;

    // anything reachable from a one-hop successor in >= 1 further step is a
    // shortcut target, not a direct successor
    std::unordered_set<std::string> reach;
    std::vector<std::string> stack;
    for (const std::string& succ : direct) {
        if (auto it = fwd.find(succ); it != fwd.end()) {
            for (uint32_t ei : it->second) {
                if (reach.insert(edges_[ei].target).second) stack.push_back(edges_[ei].target);
            }
        }
    }
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (auto it = fwd.find(cur); it != fwd.end()) {
            for (uint32_t ei : it->second) {
                if (reach.insert(edges_[ei].target).second) stack.push_back(edges_[ei].target);
            }
        }
    }
    std::erase_if(direct, [&](const std::string& s) { return reach.count(s) > 0; });
    return direct;
}

Result<std::vector<std::string>> KnowledgeGraph::siblings(const std::string& id,
                                                          SiblingVia via) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    EdgeKind kind = via == SiblingVia::is_a_parent ? EdgeKind::is_a : EdgeKind::prerequisites_for;
    size_t k = static_cast<size_t>(kind);

    std::vector<std::string> out;
    if (auto it = out_[k].find(id); it != out_[k].end()) {
        for (uint32_t ei : it->second) {
            const std::string& shared = edges_[ei].target;
            if (auto rit = in_[k].find(shared); rit != in_[k].end()) {
                for (uint32_t ri : rit->second) {
                    if (edges_[ri].source != id) out.push_back(edges_[ri].source);
                }
            }
        }
    }
    sort_unique(out);
    return out;
}

Result<std::vector<std::string>> KnowledgeGraph::scope_pool(const std::string& id, Scope scope,
                                                            const std::set<NodeKind>& filter) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    std::vector<std::string> containers = containers_at(id, scope);
    if (containers.empty()) {
        return Error{Errc::unanchored_node, "node '" + id + "' has no " +
                                                std::string(scope_name(scope)) + " container"};
    }
    std::vector<std::string> out;
    const auto& level = scope_members_[static_cast<size_t>(scope)];
    for (const std::string& key : containers) {
        if (auto it = level.find(key); it != level.end()) {
            for (const std::string& member : it->second) {
                if (member == id) continue;
                const Node* n = find_node(member);
                if (n && filter.count(n->kind)) out.push_back(member);
            }
        }
    }
    sort_unique(out);
    return out;
}

std::vector<std::string> KnowledgeGraph::anchor_sections(const std::string& id) const {
    auto it = node_anchors_.find(id);
    return it == node_anchors_.end() ? std::vector<std::string>{} : it->second;
}

std::optional<std::string> KnowledgeGraph::section_chapter(const std::string& section_id) const {
    auto it = section_chapter_.find(section_id);
    if (it == section_chapter_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> KnowledgeGraph::chapter_book(const std::string& chapter_id) const {
    auto it = chapter_book_.find(chapter_id);
    if (it == chapter_book_.end()) return std::nullopt;
    return it->second;
}

std::optional<BookMeta> KnowledgeGraph::book_meta(const std::string& book_id) const {
    auto it = book_meta_.find(book_id);
    if (it == book_meta_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::tuple<int64_t, int64_t, int64_t, std::string>>
KnowledgeGraph::curriculum_pos(const std::string& section_id) const {
    const Node* section = find_node(section_id);
    if (!section || section->kind != NodeKind::Section) return std::nullopt;
    auto chapter_id = section_chapter(section_id);
    if (!chapter_id) return std::nullopt;
    const Node* chapter = find_node(*chapter_id);
    auto book_id = chapter_book(*chapter_id);
    if (!chapter || !book_id) return std::nullopt;
    auto meta = book_meta(*book_id);
    if (!meta) return std::nullopt;

    auto order_of = [](const Node* n) -> int64_t {
        auto it = n->props.find("order");
        return it != n->props.end() && it->is_number_integer() ? it->get<int64_t>() : 0;
    };
    return std::make_tuple(meta->order, order_of(chapter), order_of(section), section_id);
}

Result<FirstAppearance> KnowledgeGraph::first_appearance(const std::string& id) const {
    if (auto st = ensure_frozen(); !st.ok()) return st.error();
    if (auto st = ensure_node(id); !st.ok()) return st.error();
    auto anchors = anchor_sections(id);
    if (anchors.empty()) {
        return Error{Errc::unanchored_node, "node '" + id + "' has no appears_in anchor"};
    }
    std::optional<std::tuple<int64_t, int64_t, int64_t, std::string>> best;
    std::string best_section;
    for (const std::string& section : anchors) {
        auto pos = curriculum_pos(section);
        // sections outside a full hierarchy sort last, keyed by id
        auto key = pos.value_or(std::make_tuple(std::numeric_limits<int64_t>::max(),
                                                std::numeric_limits<int64_t>::max(),
                                                std::numeric_limits<int64_t>::max(), section));
        if (!best || key < *best) {
            best = key;
            best_section = section;
        }
    }
    FirstAppearance fa;
    fa.section_id = best_section;
    fa.chapter_id = section_chapter(best_section).value_or("");
    return fa;
}

std::optional<std::string> KnowledgeGraph::node_subject(const std::string& id) const {
    const Node* node = find_node(id);
    if (!node) return std::nullopt;
    auto books = containers_at(id, Scope::book);
    if (books.empty()) return std::nullopt;
    std::string book = books.front();
    if (is_content_kind(node->kind) && books.size() > 1 && frozen_) {
        if (auto fa = first_appearance(id); fa.ok()) {
            auto chapter = section_chapter(fa.value().section_id);
            if (chapter) {
                if (auto b = chapter_book(*chapter)) book = *b;
            }
        }
    }
    auto meta = book_meta(book);
    if (!meta) return std::nullopt;
    return meta->subject;
}

std::optional<std::string> KnowledgeGraph::node_stage(const std::string& id) const {
    const Node* node = find_node(id);
    if (!node) return std::nullopt;
    auto books = containers_at(id, Scope::book);
    if (books.empty()) return std::nullopt;
    std::string book = books.front();
    if (is_content_kind(node->kind) && books.size() > 1 && frozen_) {
        if (auto fa = first_appearance(id); fa.ok()) {
            auto chapter = section_chapter(fa.value().section_id);
            if (chapter) {
                if (auto b = chapter_book(*chapter)) book = *b;
            }
        }
    }
    auto meta = book_meta(book);
    if (!meta) return std::nullopt;
    return meta->stage;
}

} // namespace kgforge::graph
