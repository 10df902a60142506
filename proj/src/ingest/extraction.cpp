#include "kgforge/ingest/extraction.hpp"

#include <set>

#include "kgforge/core/text.hpp"
#include "kgforge/model/client.hpp"

namespace kgforge::ingest {

using graph::NodeKind;

namespace {

const std::set<std::string>& known_props(NodeKind kind) {
    static const std::set<std::string> concept_keys = {"definition", "importance", "examples",
                                                       "aliases",    "formula",    "unit"};
    static const std::set<std::string> skill_keys = {"description", "examples", "generalizable"};
    static const std::set<std::string> experiment_keys = {"instruments", "is_student", "process",
                                                          "phenomena", "conclusion"};
    static const std::set<std::string> exercise_keys = {"stem", "answer", "difficulty", "type",
                                                        "analysis"};
    static const std::set<std::string> container_keys = {"order", "subject", "stage", "title"};
    switch (kind) {
        case NodeKind::Concept: return concept_keys;
        case NodeKind::Skill: return skill_keys;
        case NodeKind::Experiment: return experiment_keys;
        case NodeKind::Exercise: return exercise_keys;
        default: return container_keys;
    }
}

bool is_container_ref(const std::string& s) {
    return s == kSectionRef || s == kChapterRef || s == kBookRef;
}

} // namespace

Result<SectionExtraction> parse_section_extraction(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
        return Error{Errc::malformed_document, "extraction needs a 'nodes' array"};
    }
    SectionExtraction ex;
    std::set<std::string> local_ids;

    size_t i = 0;
    for (const auto& n : doc["nodes"]) {
        const std::string path = "nodes[" + std::to_string(i) + "]";
        if (!n.is_object() || !n.contains("local_id") || !n.contains("kind")) {
            return Error{Errc::malformed_document, path + " needs local_id and kind"};
        }
        LocalNode node;
        node.local_id = n["local_id"].get<std::string>();
        auto kind = graph::node_kind_from(n["kind"].get<std::string>());
        if (!kind) {
            return Error{Errc::schema_violation,
                         path + ".kind: unknown kind '" + n["kind"].get<std::string>() + "'"};
        }
        node.kind = *kind;
        node.name = n.value("name", std::string{});
        if (n.contains("props")) {
            if (!n["props"].is_object()) {
                return Error{Errc::schema_violation, path + ".props must be an object"};
            }
            node.props = n["props"];
        }
        if (!local_ids.insert(node.local_id).second) {
            return Error{Errc::schema_violation,
                         path + ".local_id: duplicate '" + node.local_id + "'"};
        }
        if (node.name.empty() && node.kind != NodeKind::Exercise) {
            return Error{Errc::schema_violation, path + ".name missing"};
        }
        if (node.kind == NodeKind::Exercise && node.name.empty()) {
            // stem stands in for the name downstream; require it here
            auto stem = node.props.find("stem");
            if (stem == node.props.end() || !stem->is_string() ||
                stem->get<std::string>().empty()) {
                return Error{Errc::schema_violation, path + ".stem missing"};
            }
        }
        if (auto st = graph::validate_props(node.kind, node.props); !st.ok()) {
            return Error{Errc::schema_violation, path + ": " + st.error().message};
        }
        const auto& known = known_props(node.kind);
        for (auto it = node.props.begin(); it != node.props.end(); ++it) {
            if (!known.count(it.key())) {
                ex.warnings.push_back(path + ".props." + it.key() +
                                      ": unknown field preserved");
            }
        }
        ex.nodes.push_back(std::move(node));
        ++i;
    }

    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) {
            return Error{Errc::malformed_document, "'edges' must be an array"};
        }
        size_t j = 0;
        for (const auto& e : doc["edges"]) {
            const std::string path = "edges[" + std::to_string(j) + "]";
            if (!e.is_object() || !e.contains("kind") || !e.contains("source") ||
                !e.contains("target")) {
                return Error{Errc::malformed_document, path + " needs kind/source/target"};
            }
            LocalEdge edge;
            auto kind = graph::edge_kind_from(e["kind"].get<std::string>());
            if (!kind) {
                return Error{Errc::schema_violation,
                             path + ".kind: unknown kind '" + e["kind"].get<std::string>() + "'"};
            }
            edge.kind = *kind;
            edge.source = e["source"].get<std::string>();
            edge.target = e["target"].get<std::string>();
            edge.evidence = e.value("evidence", std::string{});
            for (const auto& [field, endpoint] :
                 {std::pair{"source", edge.source}, std::pair{"target", edge.target}}) {
                if (!local_ids.count(endpoint) && !is_container_ref(endpoint)) {
                    return Error{Errc::schema_violation, path + "." + field +
                                                             ": unknown local endpoint '" +
                                                             endpoint + "'"};
                }
            }
            ex.edges.push_back(std::move(edge));
            ++j;
        }
    }
    return ex;
}

nlohmann::json extraction_to_json(const SectionExtraction& ex) {
    nlohmann::json doc;
    doc["schema_version"] = kExtractionSchemaVersion;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : ex.nodes) {
        nlohmann::json j;
        j["local_id"] = n.local_id;
        j["kind"] = graph::node_kind_name(n.kind);
        if (!n.name.empty()) j["name"] = n.name;
        j["props"] = n.props;
        nodes.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : ex.edges) {
        nlohmann::json j;
        j["kind"] = graph::edge_kind_name(e.kind);
        j["source"] = e.source;
        j["target"] = e.target;
        if (!e.evidence.empty()) j["evidence"] = e.evidence;
        edges.push_back(std::move(j));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

Result<nlohmann::json> parse_model_extraction(const std::string& raw) {
    nlohmann::json doc = nlohmann::json::parse(raw, nullptr, false);
    if (!doc.is_discarded()) return doc;

    // salvage: strip markdown fences the prompt forbids but models still emit
    auto inner = model::strip_code_fences(raw);
    if (inner.ok()) {
        doc = nlohmann::json::parse(inner.value(), nullptr, false);
        if (!doc.is_discarded()) return doc;
    }
    return Error{Errc::malformed, "model output is not parseable JSON"};
}

} // namespace kgforge::ingest
