#pragma once

#include "kgforge/bench/item.hpp"
#include "kgforge/eval/metrics.hpp"
#include "kgforge/model/client.hpp"

namespace kgforge::eval {

inline constexpr const char* kAnswerPromptVersion = "1";

struct EvalConfig {
    int max_retries = 5;   // additional attempts after the first
    int concurrency = 8;   // bounded in-flight requests
    int max_tokens = 32;   // decoding: temperature 0.0, top_p 1.0
};

struct EvalRecord {
    std::string item_id;
    std::string family;
    std::string subtask;
    std::string subject;
    std::string raw;       // verbatim model output (last attempt)
    bool parse_failed = false;
    bool exhausted_retries = false;
    LabelSet parsed;       // valid iff !parse_failed
    InstanceScore score;
    int retries = 0;

    nlohmann::json to_json() const;
};

struct EvalReport {
    AggregateReport by_family;
    AggregateReport by_subject;
    size_t items = 0;
    size_t parse_failures = 0;
    size_t exhausted = 0;
    size_t total_retries = 0;

    nlohmann::json to_json() const;
    std::string to_markdown() const;
};

// Two-message answering prompt: fixed system instruction plus the question
// with its four labeled options.
model::ChatRequest render_answer_prompt(const bench::BenchItem& item, int max_tokens = 32);

// Sends every item, parses and scores the replies. A parse failure or client
// error retries up to the cap; items that never parse are flagged and score
// zero, keeping denominators fixed. Record order follows the input order
// regardless of the concurrency level.
Result<std::vector<EvalRecord>> run_eval(const std::vector<bench::BenchItem>& items,
                                         model::ModelClient& client,
                                         const EvalConfig& config = {});

EvalReport build_report(const std::vector<EvalRecord>& records);

} // namespace kgforge::eval
