#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgforge/core/error.hpp"

namespace kgforge::ingest {

inline constexpr const char* kManifestSchemaVersion = "1";

struct BookInfo {
    std::string id;
    std::string title;
    std::string subject;
    std::string stage;
    int64_t order = 1;
};

struct SectionManifestEntry {
    std::string book_id;
    std::string chapter_title;
    int64_t chapter_order = 0;
    std::string section_title;
    int64_t section_order = 0;
    std::string file; // extraction (or markdown) file, relative to the manifest
};

struct Manifest {
    BookInfo book;
    std::vector<SectionManifestEntry> entries; // curriculum order
};

// sections_index.json: {"schema_version", "book": {...}, "sections": [...]}.
// Entries come back sorted by (chapter_order, section_order); duplicate
// (chapter, section) positions and non-positive orders are rejected.
Result<Manifest> parse_manifest(const nlohmann::json& doc);

nlohmann::json manifest_to_json(const Manifest& m);

} // namespace kgforge::ingest
