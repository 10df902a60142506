#pragma once

#include <filesystem>

#include "kgforge/graph/graph.hpp"

namespace kgforge::graph {

// One JSON document: {"edges": [...], "meta": {...}, "nodes": [...]}.
// Nodes sorted by id, edges by (kind, source, target, evidence), keys sorted;
// serializing a parsed graph reproduces the input bytes.
nlohmann::json to_json(const KnowledgeGraph& g);

Result<KnowledgeGraph> from_json(const nlohmann::json& doc, FreezeMode mode = FreezeMode::partial);

// Parses without freezing; caller decides when to freeze.
Result<KnowledgeGraph> from_json_building(const nlohmann::json& doc);

std::string serialize(const KnowledgeGraph& g);

Status save_graph(const KnowledgeGraph& g, const std::filesystem::path& path);
Result<KnowledgeGraph> load_graph(const std::filesystem::path& path,
                                  FreezeMode mode = FreezeMode::partial);
Result<KnowledgeGraph> load_graph_building(const std::filesystem::path& path);

} // namespace kgforge::graph
