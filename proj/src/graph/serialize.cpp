#include "kgforge/graph/serialize.hpp"

#include <algorithm>
#include <fstream>

#include "kgforge/core/jsonl.hpp"

namespace kgforge::graph {

nlohmann::json to_json(const KnowledgeGraph& g) {
    nlohmann::json doc;
    nlohmann::json meta;
    meta["schema_version"] = kGraphSchemaVersion;
    meta["certified"] = g.certified();
    nlohmann::json validated = nlohmann::json::array();
    for (EdgeKind k : all_edge_kinds()) {
        if (g.dag_validated(k)) validated.push_back(edge_kind_name(k));
    }
    meta["dag_validated"] = validated;
    doc["meta"] = meta;

    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, node] : g.nodes()) {
        nlohmann::json n;
        n["id"] = node.id;
        n["kind"] = node_kind_name(node.kind);
        n["name"] = node.name;
        n["props"] = node.props;
        if (node.provenance) {
            n["provenance"] = {{"book", node.provenance->book_id},
                               {"section", node.provenance->section_id}};
        }
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);

    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.kind, a.source, a.target, a.evidence) <
               std::tie(b.kind, b.source, b.target, b.evidence);
    });
    nlohmann::json edges_json = nlohmann::json::array();
    for (const Edge& e : edges) {
        nlohmann::json j;
        j["kind"] = edge_kind_name(e.kind);
        j["source"] = e.source;
        j["target"] = e.target;
        if (!e.evidence.empty()) j["evidence"] = e.evidence;
        edges_json.push_back(std::move(j));
    }
    doc["edges"] = std::move(edges_json);
    return doc;
}

std::string serialize(const KnowledgeGraph& g) {
    return to_json(g).dump(2) + "\n";
}

Result<KnowledgeGraph> from_json_building(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
        return Error{Errc::malformed_document, "graph document needs 'nodes' and 'edges'"};
    }
    KnowledgeGraph g;
    for (const auto& n : doc["nodes"]) {
        Node node;
        if (!n.is_object() || !n.contains("id") || !n.contains("kind")) {
            return Error{Errc::malformed_document, "node entry missing id/kind"};
        }
        node.id = n["id"].get<std::string>();
        auto kind = node_kind_from(n["kind"].get<std::string>());
        if (!kind) {
            return Error{Errc::malformed_document,
                         "unknown node kind '" + n["kind"].get<std::string>() + "'"};
        }
        node.kind = *kind;
        node.name = n.value("name", std::string{});
        if (n.contains("props")) node.props = n["props"];
        if (n.contains("provenance")) {
            Provenance p;
            p.book_id = n["provenance"].value("book", std::string{});
            p.section_id = n["provenance"].value("section", std::string{});
            node.provenance = std::move(p);
        }
        if (auto st = g.add_node(std::move(node)); !st.ok()) return st.error();
    }
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("kind") || !e.contains("source") ||
            !e.contains("target")) {
            return Error{Errc::malformed_document, "edge entry missing kind/source/target"};
        }
        Edge edge;
        auto kind = edge_kind_from(e["kind"].get<std::string>());
        if (!kind) {
            return Error{Errc::malformed_document,
                         "unknown edge kind '" + e["kind"].get<std::string>() + "'"};
        }
        edge.kind = *kind;
        edge.source = e["source"].get<std::string>();
        edge.target = e["target"].get<std::string>();
        edge.evidence = e.value("evidence", std::string{});
        if (auto st = g.add_edge(std::move(edge)); !st.ok()) return st.error();
    }
    if (doc.contains("meta")) {
        const auto& meta = doc["meta"];
        if (meta.contains("dag_validated")) {
            for (const auto& kn : meta["dag_validated"]) {
                if (auto k = edge_kind_from(kn.get<std::string>())) g.mark_dag_validated(*k);
            }
        }
        g.set_certified(meta.value("certified", false));
    }
    return g;
}

Result<KnowledgeGraph> from_json(const nlohmann::json& doc, FreezeMode mode) {
    auto g = from_json_building(doc);
    if (!g.ok()) return g;
    g.value().freeze(mode);
    return g;
}

Status save_graph(const KnowledgeGraph& g, const std::filesystem::path& path) {
    return jsonl::write_text_file(path, serialize(g));
}

Result<KnowledgeGraph> load_graph(const std::filesystem::path& path, FreezeMode mode) {
    auto text = jsonl::read_text_file(path);
    if (!text.ok()) return text.error();
    nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
    if (doc.is_discarded()) {
        return Error{Errc::malformed_document, path.string() + " is not valid JSON"};
    }
    return from_json(doc, mode);
}

Result<KnowledgeGraph> load_graph_building(const std::filesystem::path& path) {
    auto text = jsonl::read_text_file(path);
    if (!text.ok()) return text.error();
    nlohmann::json doc = nlohmann::json::parse(text.value(), nullptr, false);
    if (doc.is_discarded()) {
        return Error{Errc::malformed_document, path.string() + " is not valid JSON"};
    }
    return from_json_building(doc);
}

} // namespace kgforge::graph
