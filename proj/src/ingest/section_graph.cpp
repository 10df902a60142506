#include "kgforge/ingest/section_graph.hpp"

#include <cstdio>
#include <map>

namespace kgforge::ingest {

using graph::Edge;
using graph::EdgeKind;
using graph::KnowledgeGraph;
using graph::Node;
using graph::NodeKind;

namespace {

std::string pad3(int64_t v) {
    char buf[24];
    snprintf(buf, sizeof(buf), "%03lld", static_cast<long long>(v));
    return buf;
}

const char* kind_tag(NodeKind k) {
    switch (k) {
        case NodeKind::Concept: return "concept";
        case NodeKind::Skill: return "skill";
        case NodeKind::Experiment: return "experiment";
        case NodeKind::Exercise: return "exercise";
        default: return "node";
    }
}

} // namespace

std::string chapter_id_for(const BookInfo& book, int64_t chapter_order) {
    return book.id + "/ch" + pad3(chapter_order);
}

std::string section_id_for(const BookInfo& book, int64_t chapter_order, int64_t section_order) {
    return chapter_id_for(book, chapter_order) + "/s" + pad3(section_order);
}

Result<KnowledgeGraph> build_section_graph(const BookInfo& book,
                                           const SectionManifestEntry& entry,
                                           const SectionExtraction& extraction) {
    KnowledgeGraph g;
    const std::string chapter_id = chapter_id_for(book, entry.chapter_order);
    const std::string section_id =
        section_id_for(book, entry.chapter_order, entry.section_order);

    Node book_node;
    book_node.id = book.id;
    book_node.kind = NodeKind::Book;
    book_node.name = book.title.empty() ? book.id : book.title;
    book_node.props = {{"subject", book.subject}, {"stage", book.stage}, {"order", book.order}};
    if (auto st = g.add_node(std::move(book_node)); !st.ok()) return st.error();

    Node chapter;
    chapter.id = chapter_id;
    chapter.kind = NodeKind::Chapter;
    chapter.name = entry.chapter_title;
    chapter.props = {{"order", entry.chapter_order}};
    if (auto st = g.add_node(std::move(chapter)); !st.ok()) return st.error();

    Node section;
    section.id = section_id;
    section.kind = NodeKind::Section;
    section.name = entry.section_title;
    section.props = {{"order", entry.section_order}};
    if (auto st = g.add_node(std::move(section)); !st.ok()) return st.error();

    if (auto st = g.add_edge({EdgeKind::is_part_of, chapter_id, book.id, ""}); !st.ok()) {
        return st.error();
    }
    if (auto st = g.add_edge({EdgeKind::is_part_of, section_id, chapter_id, ""}); !st.ok()) {
        return st.error();
    }

    // local id -> section-namespaced provisional id
    std::map<std::string, std::string> id_map;
    std::map<NodeKind, int> counters;
    for (const LocalNode& local : extraction.nodes) {
        Node node;
        node.kind = local.kind;
        node.id = section_id + "/" + kind_tag(local.kind) + "/" + pad3(++counters[local.kind]);
        node.name = local.name;
        if (node.name.empty() && local.kind == NodeKind::Exercise) {
            node.name = local.props.value("stem", std::string{});
        }
        node.props = local.props;
        node.provenance = graph::Provenance{book.id, section_id};
        id_map[local.local_id] = node.id;
        if (auto st = g.add_node(std::move(node)); !st.ok()) return st.error();
    }

    auto resolve = [&](const std::string& endpoint) -> std::string {
        if (endpoint == kSectionRef) return section_id;
        if (endpoint == kChapterRef) return chapter_id;
        if (endpoint == kBookRef) return book.id;
        auto it = id_map.find(endpoint);
        return it == id_map.end() ? std::string{} : it->second;
    };

    std::set<std::string> explicitly_anchored;
    for (const LocalEdge& local : extraction.edges) {
        Edge edge;
        edge.kind = local.kind;
        edge.source = resolve(local.source);
        edge.target = resolve(local.target);
        edge.evidence = local.evidence;
        if (edge.source.empty() || edge.target.empty()) {
            return Error{Errc::schema_violation,
                         "edge endpoint does not resolve: " + local.source + " -> " +
                             local.target};
        }
        if (local.kind == EdgeKind::appears_in) explicitly_anchored.insert(edge.source);
        if (auto st = g.add_edge(std::move(edge)); !st.ok()) return st.error();
    }

    // every content node is anchored to its section
    for (const auto& [local_id, provisional_id] : id_map) {
        (void)local_id;
        const Node* n = g.find_node(provisional_id);
        if (n && graph::is_content_kind(n->kind) && !explicitly_anchored.count(provisional_id)) {
            if (auto st = g.add_edge({EdgeKind::appears_in, provisional_id, section_id, ""});
                !st.ok()) {
                return st.error();
            }
        }
    }
    return g;
}

} // namespace kgforge::ingest
