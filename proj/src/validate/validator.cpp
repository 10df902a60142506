#include "kgforge/validate/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace kgforge::validate {

using graph::Edge;
using graph::EdgeKind;
using graph::KnowledgeGraph;

nlohmann::json CycleReport::to_json() const {
    nlohmann::json doc;
    doc["kind"] = graph::edge_kind_name(kind);
    doc["scc_count"] = scc_count;
    doc["truncated"] = truncated;
    nlohmann::json cycle_list = nlohmann::json::array();
    for (const auto& c : cycles) {
        nlohmann::json j;
        j["nodes"] = c.nodes;
        if (!c.justification.empty()) j["justification"] = c.justification;
        cycle_list.push_back(std::move(j));
    }
    doc["cycles"] = std::move(cycle_list);
    return doc;
}

namespace {

using Adj = std::map<std::string, std::vector<std::string>>;

Adj subgraph_adjacency(const KnowledgeGraph& g, EdgeKind kind) {
    Adj adj;
    for (const Edge& e : g.edges()) {
        if (e.kind == kind) adj[e.source].push_back(e.target);
    }
    for (auto& [id, outs] : adj) {
        std::sort(outs.begin(), outs.end());
        outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    }
    return adj;
}

// Iterative Tarjan; recursion depth is unbounded on merged curriculum graphs.
std::vector<std::vector<std::string>> strongly_connected_components(const Adj& adj) {
    std::vector<std::string> ids;
    std::set<std::string> id_set;
    for (const auto& [src, outs] : adj) {
        id_set.insert(src);
        for (const auto& t : outs) id_set.insert(t);
    }
    ids.assign(id_set.begin(), id_set.end());
    std::unordered_map<std::string, int> index_of;
    for (size_t i = 0; i < ids.size(); ++i) index_of[ids[i]] = static_cast<int>(i);

    const int n = static_cast<int>(ids.size());
    std::vector<std::vector<int>> out(n);
    for (const auto& [src, outs] : adj) {
        int s = index_of[src];
        for (const auto& t : outs) out[s].push_back(index_of[t]);
    }

    std::vector<int> index(n, -1), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<std::string>> sccs;
    int next_index = 0;

    struct Frame {
        int v;
        size_t edge = 0;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < out[f.v].size()) {
                int w = out[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    std::vector<std::string> scc;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc.push_back(ids[w]);
                    } while (w != f.v);
                    if (scc.size() > 1) {
                        std::sort(scc.begin(), scc.end());
                        sccs.push_back(std::move(scc));
                    }
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
                }
            }
        }
    }
    std::sort(sccs.begin(), sccs.end());
    return sccs;
}

std::vector<std::string> canonical_rotation(std::vector<std::string> cycle) {
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    return cycle;
}

// Johnson-style enumeration of simple cycles inside one SCC, capped.
void enumerate_scc_cycles(const Adj& adj, const std::vector<std::string>& scc_nodes,
                          size_t cap, std::set<std::vector<std::string>>& cycles,
                          bool& truncated) {
    std::set<std::string> alive(scc_nodes.begin(), scc_nodes.end());

    for (const std::string& start : scc_nodes) {
        if (cycles.size() >= cap) {
            truncated = true;
            return;
        }
        // blocked DFS for simple cycles through `start`
        std::vector<std::string> path{start};
        std::set<std::string> on_path{start};

        struct Frame {
            std::string node;
            std::vector<std::string> nexts;
            size_t i = 0;
        };
        auto successors = [&](const std::string& v) {
            std::vector<std::string> outs;
            if (auto it = adj.find(v); it != adj.end()) {
                for (const auto& t : it->second) {
                    if (alive.count(t)) outs.push_back(t);
                }
            }
            return outs;
        };
        std::vector<Frame> frames{{start, successors(start)}};
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (cycles.size() >= cap) {
                truncated = true;
                return;
            }
            if (f.i >= f.nexts.size()) {
                frames.pop_back();
                on_path.erase(path.back());
                path.pop_back();
                continue;
            }
            const std::string next = f.nexts[f.i++];
            if (next == start) {
                cycles.insert(canonical_rotation(path));
                continue;
            }
            if (on_path.count(next)) continue;
            path.push_back(next);
            on_path.insert(next);
            frames.push_back({next, successors(next)});
        }
        alive.erase(start); // cycles through `start` are fully covered
    }
}

} // namespace

Result<CycleReport> detect_cycles(const KnowledgeGraph& g, EdgeKind kind) {
    if (kind != EdgeKind::is_a && kind != EdgeKind::prerequisites_for) {
        return Error{Errc::unsupported_kind,
                     std::string("cycle detection only covers is_a and prerequisites_for, got ") +
                         graph::edge_kind_name(kind)};
    }
    CycleReport report;
    report.kind = kind;
    Adj adj = subgraph_adjacency(g, kind);
    auto sccs = strongly_connected_components(adj);
    report.scc_count = sccs.size();

    for (const auto& scc : sccs) {
        std::set<std::vector<std::string>> found;
        bool truncated = false;
        enumerate_scc_cycles(adj, scc, kMaxCyclesPerScc, found, truncated);
        report.truncated = report.truncated || truncated;
        for (auto& c : found) report.cycles.push_back({c, ""});
    }
    std::sort(report.cycles.begin(), report.cycles.end(), [](const Cycle& a, const Cycle& b) {
        if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
        return a.nodes < b.nodes;
    });
    return report;
}

Result<std::vector<Resolution>> parse_resolutions(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        return Error{Errc::malformed_document, "resolutions file must be a JSON array"};
    }
    std::vector<Resolution> out;
    size_t i = 0;
    for (const auto& r : doc) {
        const std::string path = "resolutions[" + std::to_string(i++) + "]";
        if (!r.is_object() || !r.contains("action") || !r.contains("edge")) {
            return Error{Errc::malformed_document, path + " needs 'action' and 'edge'"};
        }
        Resolution res;
        const std::string action = r["action"].get<std::string>();
        if (action == "remove") {
            res.action = Resolution::Action::remove;
        } else if (action == "retarget") {
            res.action = Resolution::Action::retarget;
        } else if (action == "keep") {
            res.action = Resolution::Action::keep;
        } else {
            return Error{Errc::malformed_document, path + ": unknown action '" + action + "'"};
        }
        const auto& edge = r["edge"];
        auto kind = graph::edge_kind_from(edge.value("kind", std::string{}));
        if (!kind) return Error{Errc::malformed_document, path + ".edge.kind invalid"};
        res.kind = *kind;
        res.source = edge.value("source", std::string{});
        res.target = edge.value("target", std::string{});
        res.new_target = r.value("new_target", std::string{});
        res.justification = r.value("justification", std::string{});
        if (res.action == Resolution::Action::retarget && res.new_target.empty()) {
            return Error{Errc::malformed_document, path + ": retarget needs 'new_target'"};
        }
        if (res.action == Resolution::Action::keep && res.justification.empty()) {
            return Error{Errc::malformed_document, path + ": keep needs 'justification'"};
        }
        out.push_back(std::move(res));
    }
    return out;
}

Result<ResolutionOutcome> apply_resolutions(KnowledgeGraph graph,
                                            const std::vector<Resolution>& resolutions) {
    // (kind, source, target) -> justification, for annotating residual cycles
    std::map<std::tuple<EdgeKind, std::string, std::string>, std::string> kept;

    for (const Resolution& r : resolutions) {
        bool exists = false;
        for (const Edge& e : graph.edges()) {
            if (e.kind == r.kind && e.source == r.source && e.target == r.target) {
                exists = true;
                break;
            }
        }
        if (!exists) {
            return Error{Errc::unknown_edge,
                         std::string(graph::edge_kind_name(r.kind)) + " " + r.source + " -> " +
                             r.target + " does not exist"};
        }
        switch (r.action) {
            case Resolution::Action::remove: {
                auto removed = graph.remove_edges(r.kind, r.source, r.target);
                if (!removed.ok()) return removed.error();
                break;
            }
            case Resolution::Action::retarget: {
                std::string evidence;
                for (const Edge& e : graph.edges()) {
                    if (e.kind == r.kind && e.source == r.source && e.target == r.target) {
                        evidence = e.evidence;
                        break;
                    }
                }
                auto removed = graph.remove_edges(r.kind, r.source, r.target);
                if (!removed.ok()) return removed.error();
                if (auto st = graph.add_edge({r.kind, r.source, r.new_target, evidence});
                    !st.ok()) {
                    return Error{Errc::invalid_retarget,
                                 "retarget to '" + r.new_target + "': " + st.error().message};
                }
                break;
            }
            case Resolution::Action::keep:
                kept[{r.kind, r.source, r.target}] = r.justification;
                break;
        }
    }

    ResolutionOutcome outcome;
    for (EdgeKind kind : {EdgeKind::is_a, EdgeKind::prerequisites_for}) {
        auto report = detect_cycles(graph, kind);
        if (!report.ok()) return report.error();
        for (Cycle& c : report.value().cycles) {
            for (size_t i = 0; i < c.nodes.size() && c.justification.empty(); ++i) {
                const std::string& src = c.nodes[i];
                const std::string& dst = c.nodes[(i + 1) % c.nodes.size()];
                if (auto it = kept.find({kind, src, dst}); it != kept.end()) {
                    c.justification = it->second;
                }
            }
        }
        outcome.residual.push_back(std::move(report).value());
    }
    outcome.graph = std::move(graph);
    return outcome;
}

CertifyOutcome certify(KnowledgeGraph graph) {
    CertifyOutcome outcome;
    for (EdgeKind kind : {EdgeKind::is_a, EdgeKind::prerequisites_for}) {
        auto report = detect_cycles(graph, kind);
        if (!report.ok()) {
            outcome.violations.push_back(report.error().to_string());
            continue;
        }
        for (const Cycle& c : report.value().cycles) {
            std::string desc = std::string(graph::edge_kind_name(kind)) + " cycle:";
            for (const auto& n : c.nodes) desc += " " + n;
            outcome.violations.push_back(desc);
        }
    }
    auto assembly = graph.freeze(graph::FreezeMode::require_assembly);
    for (const auto& v : assembly) {
        outcome.violations.push_back(v.where + ": " + v.what);
    }
    if (!outcome.violations.empty()) {
        outcome.certified = false;
        outcome.graph = std::move(graph);
        return outcome;
    }
    graph.mark_dag_validated(EdgeKind::is_a);
    graph.mark_dag_validated(EdgeKind::prerequisites_for);
    graph.set_certified(true);
    outcome.certified = true;
    outcome.graph = std::move(graph);
    return outcome;
}

} // namespace kgforge::validate
