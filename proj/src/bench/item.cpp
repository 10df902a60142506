#include "kgforge/bench/item.hpp"

namespace kgforge::bench {

nlohmann::json BenchItem::to_json() const {
    nlohmann::json doc;
    doc["item_id"] = item_id;
    doc["family"] = family;
    doc["subtask"] = subtask;
    doc["subject"] = subject;
    doc["stage"] = stage;
    doc["question"] = question;
    nlohmann::json opts = nlohmann::json::array();
    for (const auto& o : options) {
        opts.push_back({{"label", o.label},
                        {"text", o.text},
                        {"node_id", o.node_id},
                        {"is_gold", o.is_gold}});
    }
    doc["options"] = std::move(opts);
    doc["gold_labels"] = gold_labels;
    doc["k"] = k;
    doc["provenance"] = {{"query_node", query_node}, {"gold_edges", gold_edges}};
    return doc;
}

Result<BenchItem> BenchItem::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("item_id") || !doc.contains("options") ||
        !doc.contains("gold_labels")) {
        return Error{Errc::malformed_document, "bench item missing required fields"};
    }
    BenchItem item;
    item.item_id = doc["item_id"].get<std::string>();
    item.family = doc.value("family", std::string{});
    item.subtask = doc.value("subtask", std::string{});
    item.subject = doc.value("subject", std::string{});
    item.stage = doc.value("stage", std::string{});
    item.question = doc.value("question", std::string{});
    for (const auto& o : doc["options"]) {
        BenchOption opt;
        opt.label = o.value("label", std::string{});
        opt.text = o.value("text", std::string{});
        opt.node_id = o.value("node_id", std::string{});
        opt.is_gold = o.value("is_gold", false);
        item.options.push_back(std::move(opt));
    }
    if (item.options.size() != 4) {
        return Error{Errc::malformed_document,
                     "bench item '" + item.item_id + "' does not have 4 options"};
    }
    for (const auto& l : doc["gold_labels"]) item.gold_labels.push_back(l.get<std::string>());
    if (item.gold_labels.empty() || item.gold_labels.size() > 3) {
        return Error{Errc::malformed_document,
                     "bench item '" + item.item_id + "' has invalid gold cardinality"};
    }
    item.k = doc.value("k", static_cast<int>(item.gold_labels.size()));
    if (doc.contains("provenance")) {
        item.query_node = doc["provenance"].value("query_node", std::string{});
        if (doc["provenance"].contains("gold_edges")) {
            item.gold_edges = doc["provenance"]["gold_edges"];
        }
    }
    return item;
}

} // namespace kgforge::bench
