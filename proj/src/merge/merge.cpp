#include "kgforge/merge/merge.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "kgforge/core/ngram.hpp"
#include "kgforge/core/text.hpp"

namespace kgforge::merge {

using graph::Edge;
using graph::EdgeKind;
using graph::KnowledgeGraph;
using graph::Node;
using graph::NodeKind;

std::string normalize_name(std::string_view raw) {
    auto cps = text::decode_utf8(raw);
    for (auto& cp : cps) cp = text::ascii_lower(text::fold_width(cp));

    // collapse whitespace runs
    std::vector<uint32_t> collapsed;
    bool prev_space = false;
    for (uint32_t cp : cps) {
        if (text::is_space(cp)) {
            if (!prev_space && !collapsed.empty()) collapsed.push_back(' ');
            prev_space = true;
        } else {
            collapsed.push_back(cp);
            prev_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();

    // strip surrounding punctuation (and any whitespace it exposes)
    size_t b = 0, e = collapsed.size();
    auto strippable = [&](uint32_t cp) {
        return text::is_surrounding_punct(cp) || cp == ' ';
    };
    while (b < e && strippable(collapsed[b])) ++b;
    while (e > b && strippable(collapsed[e - 1])) --e;
    return text::encode_utf8(std::vector<uint32_t>(collapsed.begin() + b, collapsed.begin() + e));
}

Result<std::vector<AliasEntry>> parse_alias_file(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        return Error{Errc::malformed_document, "alias file must be a JSON array"};
    }
    std::vector<AliasEntry> out;
    for (const auto& e : doc) {
        if (!e.is_object() || !e.contains("canonical") || !e.contains("aliases") ||
            !e["aliases"].is_array()) {
            return Error{Errc::malformed_document,
                         "alias entry needs 'canonical' and 'aliases' array"};
        }
        AliasEntry entry;
        entry.canonical = e["canonical"].get<std::string>();
        for (const auto& a : e["aliases"]) entry.aliases.push_back(a.get<std::string>());
        out.push_back(std::move(entry));
    }
    return out;
}

nlohmann::json MergeReport::to_json() const {
    nlohmann::json doc;
    doc["nodes_in"] = nodes_in;
    doc["nodes_out"] = nodes_out;
    doc["edges_in"] = edges_in;
    doc["edges_out"] = edges_out;
    doc["merged_groups"] = merged_groups;
    doc["self_loops_dropped"] = self_loops_dropped;
    nlohmann::json aliases = nlohmann::json::array();
    for (const auto& g : alias_table) {
        aliases.push_back({{"canonical_id", g.canonical_id},
                           {"canonical_name", g.canonical_name},
                           {"merged_ids", g.merged_ids},
                           {"merged_names", g.merged_names}});
    }
    doc["alias_table"] = std::move(aliases);
    nlohmann::json conflict_list = nlohmann::json::array();
    for (const auto& c : conflicts) {
        conflict_list.push_back({{"canonical_id", c.canonical_id},
                                 {"field", c.field},
                                 {"kept", c.kept},
                                 {"alternate", c.alternate},
                                 {"alternate_from", c.alternate_from}});
    }
    doc["conflicts"] = std::move(conflict_list);
    nlohmann::json review = nlohmann::json::array();
    for (const auto& r : review_candidates) {
        review.push_back(
            {{"id_a", r.id_a}, {"id_b", r.id_b}, {"name_similarity", r.name_similarity}});
    }
    doc["review_candidates"] = std::move(review);
    return doc;
}

namespace {

const char* kind_tag(NodeKind k) {
    switch (k) {
        case NodeKind::Concept: return "concept";
        case NodeKind::Skill: return "skill";
        case NodeKind::Experiment: return "experiment";
        case NodeKind::Exercise: return "exercise";
        default: return "node";
    }
}

using CurPos = std::tuple<int64_t, int64_t, int64_t, std::string>;

constexpr int64_t kFar = std::numeric_limits<int64_t>::max();

// Curriculum coordinates computed over the raw node/edge lists so merging
// works on unfrozen inputs.
struct CurriculumIndex {
    std::map<std::string, CurPos> section_pos;
    std::map<std::string, std::vector<std::string>> anchors; // node -> sections

    CurPos node_pos(const Node& n) const {
        if (n.kind == NodeKind::Book) {
            int64_t o = n.props.value("order", int64_t{0});
            return {o, 0, 0, n.id};
        }
        auto it = anchors.find(n.id);
        CurPos best{kFar, kFar, kFar, n.id};
        if (it != anchors.end()) {
            for (const auto& s : it->second) {
                auto sp = section_pos.find(s);
                if (sp != section_pos.end() && sp->second < best) best = sp->second;
            }
        }
        return best;
    }
};

CurriculumIndex build_curriculum_index(const std::map<std::string, Node>& nodes,
                                       const std::vector<Edge>& edges) {
    CurriculumIndex idx;
    std::map<std::string, std::string> section_chapter, chapter_book;
    for (const Edge& e : edges) {
        if (e.kind == EdgeKind::is_part_of) {
            auto it = nodes.find(e.source);
            if (it == nodes.end()) continue;
            if (it->second.kind == NodeKind::Section) section_chapter[e.source] = e.target;
            if (it->second.kind == NodeKind::Chapter) chapter_book[e.source] = e.target;
        } else if (e.kind == EdgeKind::appears_in) {
            idx.anchors[e.source].push_back(e.target);
        }
    }
    auto order_of = [&](const std::string& id) -> int64_t {
        auto it = nodes.find(id);
        if (it == nodes.end()) return kFar;
        return it->second.props.value("order", int64_t{0});
    };
    for (const auto& [id, node] : nodes) {
        if (node.kind != NodeKind::Section) continue;
        int64_t book_order = kFar;
        int64_t chapter_order = kFar;
        auto ch = section_chapter.find(id);
        if (ch != section_chapter.end()) {
            chapter_order = order_of(ch->second);
            auto bk = chapter_book.find(ch->second);
            if (bk != chapter_book.end()) book_order = order_of(bk->second);
        }
        idx.section_pos[id] = {book_order, chapter_order, order_of(id), id};
    }
    for (auto& [id, secs] : idx.anchors) {
        std::sort(secs.begin(), secs.end());
        secs.erase(std::unique(secs.begin(), secs.end()), secs.end());
    }
    return idx;
}

struct GroupSpec {
    std::vector<std::string> member_ids; // sorted by (curriculum pos, id); [0] canonical
    NodeKind kind = NodeKind::Concept;
    std::string group_name; // normalized, empty for singleton-by-identity groups
};

struct MergeCore {
    std::map<std::string, Node> all_nodes;
    std::vector<Edge> all_edges;
    CurriculumIndex curriculum;
};

// Pools nodes/edges from the input graphs. Nodes with identical ids (the
// synthesized containers) collapse to their first occurrence.
Result<MergeCore> pool_inputs(const std::vector<KnowledgeGraph>& graphs, MergeReport& report) {
    MergeCore core;
    for (const auto& g : graphs) {
        report.nodes_in += g.node_count();
        report.edges_in += g.edge_count();
        for (const auto& [id, node] : g.nodes()) {
            auto [it, inserted] = core.all_nodes.emplace(id, node);
            if (!inserted && it->second.kind != node.kind) {
                return Error{Errc::schema_violation,
                             "node '" + id + "' has conflicting kinds across fragments"};
            }
        }
        for (const Edge& e : g.edges()) core.all_edges.push_back(e);
    }
    core.curriculum = build_curriculum_index(core.all_nodes, core.all_edges);
    return core;
}

// Shared dedup/remap machinery. `group_key` returns the dedup key for a node
// (nodes with equal keys merge); `assign_id` maps a canonical node to its
// output id.
Result<MergeResult> run_merge(
    const std::vector<KnowledgeGraph>& graphs,
    const std::function<std::string(const Node&)>& group_key,
    const std::function<std::string(const Node&, const GroupSpec&)>& assign_id) {
    MergeReport report;
    auto pooled = pool_inputs(graphs, report);
    if (!pooled.ok()) return pooled.error();
    MergeCore& core = pooled.value();

    // group nodes
    std::map<std::string, GroupSpec> groups;
    for (const auto& [id, node] : core.all_nodes) {
        std::string key = group_key(node);
        auto& g = groups[key];
        g.kind = node.kind;
        g.member_ids.push_back(id);
        if (key.rfind("name:", 0) == 0) g.group_name = key;
    }
    for (auto& [key, g] : groups) {
        std::sort(g.member_ids.begin(), g.member_ids.end(),
                  [&](const std::string& a, const std::string& b) {
                      auto pa = core.curriculum.node_pos(core.all_nodes.at(a));
                      auto pb = core.curriculum.node_pos(core.all_nodes.at(b));
                      return std::tie(pa, a) < std::tie(pb, b);
                  });
    }

    // canonical order of groups: curriculum position of the canonical member
    std::vector<const GroupSpec*> ordered;
    ordered.reserve(groups.size());
    for (const auto& [key, g] : groups) ordered.push_back(&g);
    std::sort(ordered.begin(), ordered.end(), [&](const GroupSpec* a, const GroupSpec* b) {
        auto pa = core.curriculum.node_pos(core.all_nodes.at(a->member_ids.front()));
        auto pb = core.curriculum.node_pos(core.all_nodes.at(b->member_ids.front()));
        return std::tie(pa, a->member_ids.front()) < std::tie(pb, b->member_ids.front());
    });

    KnowledgeGraph out;
    std::map<std::string, std::string> id_map; // old -> new
    for (const GroupSpec* g : ordered) {
        const Node& canonical = core.all_nodes.at(g->member_ids.front());
        Node merged = canonical;
        merged.id = assign_id(canonical, *g);
        for (const auto& old_id : g->member_ids) id_map[old_id] = merged.id;

        if (g->member_ids.size() > 1) {
            MergeGroup entry;
            entry.canonical_id = merged.id;
            entry.canonical_name = canonical.name;
            std::set<std::string> alias_names;
            for (size_t i = 1; i < g->member_ids.size(); ++i) {
                const Node& other = core.all_nodes.at(g->member_ids[i]);
                entry.merged_ids.push_back(other.id);
                entry.merged_names.push_back(other.name);
                if (other.name != canonical.name) alias_names.insert(other.name);
                // earliest occurrence wins; alternates logged
                for (auto it = other.props.begin(); it != other.props.end(); ++it) {
                    auto kept = canonical.props.find(it.key());
                    if (kept == canonical.props.end() || *kept != it.value()) {
                        report.conflicts.push_back(
                            {merged.id, it.key(),
                             kept == canonical.props.end() ? nlohmann::json() : *kept,
                             it.value(), other.id});
                    }
                }
            }
            if (!alias_names.empty() && merged.kind == NodeKind::Concept) {
                nlohmann::json aliases = merged.props.value("aliases", nlohmann::json::array());
                std::set<std::string> existing;
                for (const auto& a : aliases) existing.insert(a.get<std::string>());
                for (const auto& a : alias_names) {
                    if (!existing.count(a)) aliases.push_back(a);
                }
                merged.props["aliases"] = std::move(aliases);
            }
            report.merged_groups++;
            report.alias_table.push_back(std::move(entry));
        }
        if (auto st = out.add_node(std::move(merged)); !st.ok()) return st.error();
    }

    // remap + collapse edges; evidence of collapsed duplicates is concatenated
    std::map<std::tuple<EdgeKind, std::string, std::string>, std::set<std::string>> edge_groups;
    for (const Edge& e : core.all_edges) {
        std::string src = id_map.at(e.source);
        std::string dst = id_map.at(e.target);
        if (src == dst && graph::is_acyclic_kind(e.kind)) {
            report.self_loops_dropped++;
            continue;
        }
        auto& evidences = edge_groups[{e.kind, std::move(src), std::move(dst)}];
        if (!e.evidence.empty()) evidences.insert(e.evidence);
    }
    for (const auto& [key, evidences] : edge_groups) {
        Edge e;
        e.kind = std::get<0>(key);
        e.source = std::get<1>(key);
        e.target = std::get<2>(key);
        std::string joined;
        for (const auto& ev : evidences) {
            if (!joined.empty()) joined += " | ";
            joined += ev;
        }
        e.evidence = std::move(joined);
        if (auto st = out.add_edge(std::move(e)); !st.ok()) return st.error();
    }

    report.nodes_out = out.node_count();
    report.edges_out = out.edge_count();
    return MergeResult{std::move(out), std::move(report)};
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// <book id>/<kind tag>/<digits>, with no deeper path components
bool is_global_content_id(const std::string& id, const std::string& book_id, NodeKind kind) {
    std::string prefix = book_id + "/" + kind_tag(kind) + "/";
    if (id.rfind(prefix, 0) != 0) return false;
    return all_digits(std::string_view(id).substr(prefix.size()));
}

std::string pad4(int64_t v) {
    char buf[24];
    snprintf(buf, sizeof(buf), "%04lld", static_cast<long long>(v));
    return buf;
}

} // namespace

Result<MergeResult> merge_book(const std::vector<KnowledgeGraph>& fragments) {
    if (fragments.empty()) {
        return Error{Errc::malformed_document, "no fragments to merge"};
    }
    std::string book_id;
    for (const auto& g : fragments) {
        for (const auto& [id, node] : g.nodes()) {
            if (node.kind != NodeKind::Book) continue;
            if (book_id.empty()) {
                book_id = id;
            } else if (book_id != id) {
                return Error{Errc::cross_book_fragment,
                             "fragments span books '" + book_id + "' and '" + id + "'"};
            }
        }
    }
    if (book_id.empty()) {
        return Error{Errc::cross_book_fragment, "fragments carry no Book node"};
    }

    auto group_key = [](const Node& n) -> std::string {
        if (n.kind == NodeKind::Concept || n.kind == NodeKind::Skill) {
            return std::string("name:") + graph::node_kind_name(n.kind) + "\x1f" +
                   normalize_name(n.name);
        }
        return "id:" + n.id;
    };

    // per-kind counters continue past any ids already in global form
    std::map<NodeKind, int64_t> next_counter;
    for (const auto& g : fragments) {
        for (const auto& [id, node] : g.nodes()) {
            if (!graph::is_content_kind(node.kind)) continue;
            if (is_global_content_id(id, book_id, node.kind)) {
                std::string prefix = book_id + "/" + kind_tag(node.kind) + "/";
                int64_t v = std::stoll(id.substr(prefix.size()));
                next_counter[node.kind] = std::max(next_counter[node.kind], v);
            }
        }
    }

    auto assign_id = [&, book_id](const Node& canonical, const GroupSpec&) -> std::string {
        if (!graph::is_content_kind(canonical.kind)) return canonical.id;
        if (is_global_content_id(canonical.id, book_id, canonical.kind)) return canonical.id;
        int64_t counter = ++next_counter[canonical.kind];
        return book_id + "/" + kind_tag(canonical.kind) + "/" + pad4(counter);
    };

    return run_merge(fragments, group_key, assign_id);
}

Result<MergeResult> merge_subject(const std::vector<KnowledgeGraph>& books,
                                  const std::vector<AliasEntry>& aliases) {
    if (books.empty()) {
        return Error{Errc::malformed_document, "no book graphs to merge"};
    }
    std::string subject;
    for (const auto& g : books) {
        for (const auto& [id, node] : g.nodes()) {
            if (node.kind != NodeKind::Book) continue;
            std::string s = node.props.value("subject", std::string{});
            if (subject.empty()) {
                subject = s;
            } else if (subject != s) {
                return Error{Errc::mixed_subjects,
                             "books span subjects '" + subject + "' and '" + s + "'"};
            }
        }
    }

    std::map<std::string, std::string> alias_map; // normalized alias -> normalized canonical
    for (const auto& entry : aliases) {
        std::string canon = normalize_name(entry.canonical);
        for (const auto& a : entry.aliases) alias_map[normalize_name(a)] = canon;
    }

    auto group_key = [alias_map](const Node& n) -> std::string {
        if (n.kind == NodeKind::Concept || n.kind == NodeKind::Skill) {
            std::string norm = normalize_name(n.name);
            if (auto it = alias_map.find(norm); it != alias_map.end()) norm = it->second;
            return std::string("name:") + graph::node_kind_name(n.kind) + "\x1f" + norm;
        }
        return "id:" + n.id;
    };
    auto assign_id = [](const Node& canonical, const GroupSpec&) { return canonical.id; };

    auto result = run_merge(books, group_key, assign_id);
    if (!result.ok()) return result;

    // near-miss names across books: flagged for review, never auto-merged
    struct NameRef {
        std::string id;
        std::string norm;
        std::string book;
    };
    std::vector<NameRef> refs;
    for (const auto& [id, node] : result.value().graph.nodes()) {
        if (node.kind != NodeKind::Concept && node.kind != NodeKind::Skill) continue;
        std::string book = id.substr(0, id.find("/concept/") != std::string::npos
                                            ? id.find("/concept/")
                                            : id.find("/skill/"));
        refs.push_back({id, normalize_name(node.name), book});
    }
    std::map<std::string, std::vector<size_t>> gram_index;
    for (size_t i = 0; i < refs.size(); ++i) {
        for (const auto& g : text::char_ngrams(refs[i].norm, 3)) gram_index[g].push_back(i);
    }
    std::set<std::pair<size_t, size_t>> checked;
    auto& review = result.value().report.review_candidates;
    for (const auto& [gram, members] : gram_index) {
        if (members.size() > 64) continue; // ubiquitous gram, uninformative
        for (size_t a = 0; a < members.size() && review.size() < 1000; ++a) {
            for (size_t b = a + 1; b < members.size(); ++b) {
                size_t i = members[a], j = members[b];
                if (refs[i].norm == refs[j].norm) continue;
                if (refs[i].book == refs[j].book) continue;
                if (!checked.emplace(std::min(i, j), std::max(i, j)).second) continue;
                double sim = char_ngram_cosine(refs[i].norm, refs[j].norm);
                if (sim >= 0.85) {
                    review.push_back({std::min(refs[i].id, refs[j].id),
                                      std::max(refs[i].id, refs[j].id), sim});
                }
            }
        }
    }
    std::sort(review.begin(), review.end(), [](const ReviewCandidate& a, const ReviewCandidate& b) {
        return std::tie(a.id_a, a.id_b) < std::tie(b.id_a, b.id_b);
    });
    return result;
}

Result<MergeResult> merge_union(const std::vector<KnowledgeGraph>& graphs,
                                const std::vector<Edge>& extra_edges) {
    auto group_key = [](const Node& n) { return "id:" + n.id; };
    auto assign_id = [](const Node& canonical, const GroupSpec&) { return canonical.id; };
    auto result = run_merge(graphs, group_key, assign_id);
    if (!result.ok()) return result;
    for (const Edge& e : extra_edges) {
        if (auto st = result.value().graph.add_edge(e); !st.ok()) return st.error();
        result.value().report.edges_in++;
        result.value().report.edges_out++;
    }
    return result;
}

} // namespace kgforge::merge
