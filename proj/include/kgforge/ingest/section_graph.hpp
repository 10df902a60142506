#pragma once

#include "kgforge/graph/graph.hpp"
#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/manifest.hpp"

namespace kgforge::ingest {

// Container node ids are derived from the manifest coordinates.
std::string chapter_id_for(const BookInfo& book, int64_t chapter_order);
std::string section_id_for(const BookInfo& book, int64_t chapter_order, int64_t section_order);

// Builds one unfrozen graph fragment for a section: synthesizes the
// Book/Chapter/Section containers and their is_part_of edges, maps local ids
// into the section namespace, anchors every content node to the section, and
// retargets @section/@chapter/@book references.
Result<graph::KnowledgeGraph> build_section_graph(const BookInfo& book,
                                                  const SectionManifestEntry& entry,
                                                  const SectionExtraction& extraction);

} // namespace kgforge::ingest
