#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgforge/core/error.hpp"

namespace kgforge::bench {

inline constexpr const char* kBenchSchemaVersion = "1";

struct BenchOption {
    std::string label; // "A".."D"
    std::string text;
    std::string node_id;
    bool is_gold = false;
};

// One multi-select item. Exactly four options, 1 <= |gold| <= 3, gold labels
// sorted ascending, option texts pairwise distinct.
struct BenchItem {
    std::string item_id;
    std::string family;  // ground | prereq | neighbor | evidence | locate
    std::string subtask; // ground_1, ground_2, prereq_1, ...
    std::string subject;
    std::string stage;
    std::string question;
    std::vector<BenchOption> options;
    std::vector<std::string> gold_labels;
    int k = 0;
    std::string query_node;
    nlohmann::json gold_edges = nlohmann::json::array(); // provenance

    nlohmann::json to_json() const;
    static Result<BenchItem> from_json(const nlohmann::json& doc);
};

} // namespace kgforge::bench
