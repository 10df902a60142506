#include "kgforge/stats/stats.hpp"

#include <cstdio>

namespace kgforge::stats {

using graph::EdgeKind;
using graph::NodeKind;

namespace {

void bump_node(GraphStatsRow& row, NodeKind kind) {
    switch (kind) {
        case NodeKind::Book: row.books++; break;
        case NodeKind::Concept: row.concepts++; break;
        case NodeKind::Skill: row.skills++; break;
        case NodeKind::Experiment: row.experiments++; break;
        case NodeKind::Exercise: row.exercises++; break;
        default: break;
    }
}

void bump_edge(GraphStatsRow& row, EdgeKind kind) {
    switch (kind) {
        case EdgeKind::is_a: row.is_a++; break;
        case EdgeKind::prerequisites_for: row.prerequisites_for++; break;
        case EdgeKind::relates_to: row.relates_to++; break;
        case EdgeKind::verifies: row.verifies++; break;
        case EdgeKind::tests_concept: row.tests_concept++; break;
        case EdgeKind::tests_skill: row.tests_skill++; break;
        case EdgeKind::leads_to: row.leads_to++; break;
        default: break; // appears_in / is_part_of are schema-guaranteed noise
    }
}

nlohmann::json row_to_json(const GraphStatsRow& r) {
    return {{"books", r.books},
            {"concepts", r.concepts},
            {"skills", r.skills},
            {"experiments", r.experiments},
            {"exercises", r.exercises},
            {"is_a", r.is_a},
            {"prerequisites_for", r.prerequisites_for},
            {"relates_to", r.relates_to},
            {"verifies", r.verifies},
            {"tests_concept", r.tests_concept},
            {"tests_skill", r.tests_skill},
            {"leads_to", r.leads_to}};
}

} // namespace

GraphStats graph_stats(const graph::KnowledgeGraph& g) {
    GraphStats stats;
    for (const auto& [id, node] : g.nodes()) {
        if (node.kind == NodeKind::Chapter || node.kind == NodeKind::Section) continue;
        std::string subject = g.node_subject(id).value_or("(unresolved)");
        bump_node(stats.by_subject[subject], node.kind);
        bump_node(stats.total, node.kind);
    }
    for (const auto& e : g.edges()) {
        if (e.kind == EdgeKind::appears_in || e.kind == EdgeKind::is_part_of) continue;
        std::string src_subject = g.node_subject(e.source).value_or("(unresolved)");
        if (e.kind == EdgeKind::leads_to) {
            std::string dst_subject = g.node_subject(e.target).value_or("(unresolved)");
            bump_edge(stats.total, e.kind);
            if (src_subject == dst_subject) bump_edge(stats.by_subject[src_subject], e.kind);
            continue;
        }
        bump_edge(stats.by_subject[src_subject], e.kind);
        bump_edge(stats.total, e.kind);
    }
    return stats;
}

nlohmann::json GraphStats::to_json() const {
    nlohmann::json doc;
    nlohmann::json subjects = nlohmann::json::object();
    for (const auto& [subject, row] : by_subject) subjects[subject] = row_to_json(row);
    doc["by_subject"] = std::move(subjects);
    doc["total"] = row_to_json(total);
    return doc;
}

std::string GraphStats::to_text() const {
    std::string out;
    char line[256];
    snprintf(line, sizeof(line), "%-14s %6s %6s %6s %6s %6s | %6s %7s %7s %6s %8s %8s %7s\n",
             "Subject", "Book", "Cpt", "Skl", "Exp", "Exe", "is_a", "prereq", "rel_to", "verif",
             "tes_cpt", "tes_skl", "lea_to");
    out += line;
    auto fmt = [&](const std::string& name, const GraphStatsRow& r) {
        snprintf(line, sizeof(line),
                 "%-14s %6zu %6zu %6zu %6zu %6zu | %6zu %7zu %7zu %6zu %8zu %8zu %7zu\n",
                 name.c_str(), r.books, r.concepts, r.skills, r.experiments, r.exercises, r.is_a,
                 r.prerequisites_for, r.relates_to, r.verifies, r.tests_concept, r.tests_skill,
                 r.leads_to);
        out += line;
    };
    for (const auto& [subject, row] : by_subject) fmt(subject, row);
    fmt("Total", total);
    return out;
}

Result<BenchStats> bench_stats(const std::vector<nlohmann::json>& lines) {
    BenchStats stats;
    size_t line_no = 0;
    for (const auto& doc : lines) {
        ++line_no;
        auto item = bench::BenchItem::from_json(doc);
        if (!item.ok()) {
            return Error{Errc::malformed_document,
                         "line " + std::to_string(line_no) + ": " + item.error().message};
        }
        const auto& it = item.value();
        // consistency: gold labels point at gold-flagged options
        size_t gold_flags = 0;
        for (const auto& o : it.options) gold_flags += o.is_gold ? 1 : 0;
        if (gold_flags != it.gold_labels.size()) {
            return Error{Errc::malformed_document,
                         "line " + std::to_string(line_no) + ": gold flags disagree with labels"};
        }
        stats.by_family_subject[it.family][it.subject.empty() ? "(unknown)" : it.subject]++;
        stats.k_by_subtask[it.subtask][it.k]++;
        stats.items++;
    }
    return stats;
}

nlohmann::json BenchStats::to_json() const {
    nlohmann::json doc;
    doc["items"] = items;
    nlohmann::json fam = nlohmann::json::object();
    for (const auto& [family, subjects] : by_family_subject) {
        fam[family] = subjects;
    }
    doc["by_family_subject"] = std::move(fam);
    nlohmann::json ks = nlohmann::json::object();
    for (const auto& [subtask, hist] : k_by_subtask) {
        nlohmann::json h = nlohmann::json::object();
        for (const auto& [k, n] : hist) h[std::to_string(k)] = n;
        ks[subtask] = std::move(h);
    }
    doc["k_by_subtask"] = std::move(ks);
    return doc;
}

std::string BenchStats::to_text() const {
    std::string out;
    char line[256];
    snprintf(line, sizeof(line), "%zu items\n\n%-12s %-14s %8s\n", items, "Family", "Subject",
             "Count");
    out += line;
    for (const auto& [family, subjects] : by_family_subject) {
        for (const auto& [subject, count] : subjects) {
            snprintf(line, sizeof(line), "%-12s %-14s %8zu\n", family.c_str(), subject.c_str(),
                     count);
            out += line;
        }
    }
    out += "\nCorrect-option counts per subtask:\n";
    for (const auto& [subtask, hist] : k_by_subtask) {
        std::string h;
        for (const auto& [k, n] : hist) {
            h += " k=" + std::to_string(k) + ":" + std::to_string(n);
        }
        snprintf(line, sizeof(line), "%-12s%s\n", subtask.c_str(), h.c_str());
        out += line;
    }
    return out;
}

} // namespace kgforge::stats
