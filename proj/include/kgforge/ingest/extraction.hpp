#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgforge/core/error.hpp"
#include "kgforge/graph/schema.hpp"

namespace kgforge::ingest {

inline constexpr const char* kExtractionSchemaVersion = "1";

// Edge endpoints may name a local node or one of the declared containers.
inline constexpr const char* kSectionRef = "@section";
inline constexpr const char* kChapterRef = "@chapter";
inline constexpr const char* kBookRef = "@book";

struct LocalNode {
    std::string local_id;
    graph::NodeKind kind = graph::NodeKind::Concept;
    std::string name; // may be empty for Exercise (stem stands in)
    nlohmann::json props = nlohmann::json::object();
};

struct LocalEdge {
    graph::EdgeKind kind = graph::EdgeKind::relates_to;
    std::string source;
    std::string target;
    std::string evidence;
};

struct SectionExtraction {
    std::vector<LocalNode> nodes;
    std::vector<LocalEdge> edges;
    std::vector<std::string> warnings; // unknown fields, preserved not rejected
};

// One extraction document per section:
//   {"schema_version","nodes":[{"local_id","kind","name","props"}],
//    "edges":[{"kind","source","target","evidence"?}]}
// Required per-kind fields are enforced; violations carry a JSON path.
Result<SectionExtraction> parse_section_extraction(const nlohmann::json& doc);

nlohmann::json extraction_to_json(const SectionExtraction& ex);

// Model output -> JSON: strict parse first, then one salvage pass that strips
// markdown code fences. Anything else is a hard error.
Result<nlohmann::json> parse_model_extraction(const std::string& raw);

} // namespace kgforge::ingest
