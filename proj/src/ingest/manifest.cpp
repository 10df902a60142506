#include "kgforge/ingest/manifest.hpp"

#include <algorithm>
#include <set>

namespace kgforge::ingest {

Result<Manifest> parse_manifest(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("book") || !doc.contains("sections") ||
        !doc["sections"].is_array()) {
        return Error{Errc::malformed_document, "manifest needs 'book' and 'sections'"};
    }
    Manifest m;
    const auto& book = doc["book"];
    if (!book.is_object() || !book.contains("id") || !book["id"].is_string()) {
        return Error{Errc::malformed_document, "manifest book needs an 'id'"};
    }
    m.book.id = book["id"].get<std::string>();
    m.book.title = book.value("title", m.book.id);
    m.book.subject = book.value("subject", std::string{});
    m.book.stage = book.value("stage", std::string{});
    m.book.order = book.value("order", int64_t{1});
    if (m.book.subject.empty()) {
        return Error{Errc::malformed_document, "manifest book needs a 'subject'"};
    }
    if (m.book.order <= 0) {
        return Error{Errc::non_positive_order, "book order must be positive"};
    }

    std::set<std::pair<int64_t, int64_t>> seen;
    size_t idx = 0;
    for (const auto& s : doc["sections"]) {
        if (!s.is_object()) {
            return Error{Errc::malformed_document,
                         "sections[" + std::to_string(idx) + "] is not an object"};
        }
        SectionManifestEntry e;
        e.book_id = m.book.id;
        e.chapter_title = s.value("chapter_title", std::string{});
        e.section_title = s.value("section_title", std::string{});
        e.file = s.value("file", std::string{});
        e.chapter_order = s.value("chapter_order", int64_t{0});
        e.section_order = s.value("section_order", int64_t{0});
        if (e.chapter_order <= 0 || e.section_order <= 0) {
            return Error{Errc::non_positive_order,
                         "sections[" + std::to_string(idx) + "] order must be positive"};
        }
        if (e.chapter_title.empty() || e.section_title.empty() || e.file.empty()) {
            return Error{Errc::malformed_document,
                         "sections[" + std::to_string(idx) +
                             "] needs chapter_title, section_title, file"};
        }
        if (!seen.emplace(e.chapter_order, e.section_order).second) {
            return Error{Errc::duplicate_section,
                         "duplicate (chapter " + std::to_string(e.chapter_order) + ", section " +
                             std::to_string(e.section_order) + ")"};
        }
        m.entries.push_back(std::move(e));
        ++idx;
    }
    std::sort(m.entries.begin(), m.entries.end(),
              [](const SectionManifestEntry& a, const SectionManifestEntry& b) {
                  return std::tie(a.chapter_order, a.section_order) <
                         std::tie(b.chapter_order, b.section_order);
              });
    return m;
}

nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json doc;
    doc["schema_version"] = kManifestSchemaVersion;
    doc["book"] = {{"id", m.book.id},       {"title", m.book.title}, {"subject", m.book.subject},
                   {"stage", m.book.stage}, {"order", m.book.order}};
    nlohmann::json sections = nlohmann::json::array();
    for (const auto& e : m.entries) {
        sections.push_back({{"chapter_title", e.chapter_title},
                            {"chapter_order", e.chapter_order},
                            {"section_title", e.section_title},
                            {"section_order", e.section_order},
                            {"file", e.file}});
    }
    doc["sections"] = std::move(sections);
    return doc;
}

} // namespace kgforge::ingest
