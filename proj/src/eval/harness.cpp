#include "kgforge/eval/harness.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace kgforge::eval {

namespace {

const char* kAnswerSystemPrompt =
    "You are a K-12 teaching expert.\n"
    "Please output the set of correct option letters according to the requirements of the "
    "question, and you must strictly adhere to the following format:\n"
    "- Only uppercase letters A/B/C/D are allowed;\n"
    "- Output example: \"A\" or \"A,C\";\n"
    "- Multiple letters must be arranged in ascending alphabetical order;\n"
    "- Only English commas are allowed for separation; spaces are not permitted;\n"
    "- No explanations, analyses, prefixes, suffixes, punctuation, or line breaks are "
    "allowed.\n"
    "\n"
    "Each question may have one or more correct options.\n"
    "No points will be awarded for incorrect, multiple, or missing selections.\n";

} // namespace

model::ChatRequest render_answer_prompt(const bench::BenchItem& item, int max_tokens) {
    std::string user = "Question: " + item.question + "\n";
    for (const auto& o : item.options) {
        user += o.label + ". " + o.text + "\n";
    }
    user += "\nPlease provide the set of letters for the answer:";

    model::ChatRequest req;
    req.messages = {{"system", kAnswerSystemPrompt}, {"user", user}};
    req.params.temperature = 0.0;
    req.params.top_p = 1.0;
    req.params.max_tokens = max_tokens;
    return req;
}

nlohmann::json EvalRecord::to_json() const {
    nlohmann::json doc;
    doc["item_id"] = item_id;
    doc["family"] = family;
    doc["subtask"] = subtask;
    doc["subject"] = subject;
    doc["raw"] = raw;
    doc["parse_failed"] = parse_failed;
    doc["exhausted_retries"] = exhausted_retries;
    if (!parse_failed) doc["parsed"] = parsed.labels();
    doc["retries"] = retries;
    doc["score"] = {{"em", score.em},
                    {"precision", score.precision},
                    {"recall", score.recall},
                    {"f1", score.f1}};
    return doc;
}

Result<std::vector<EvalRecord>> run_eval(const std::vector<bench::BenchItem>& items,
                                         model::ModelClient& client, const EvalConfig& config) {
    std::vector<EvalRecord> records(items.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> bad_gold{false};

    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            const bench::BenchItem& item = items[i];
            EvalRecord rec;
            rec.item_id = item.item_id;
            rec.family = item.family;
            rec.subtask = item.subtask;
            rec.subject = item.subject;

            auto gold = LabelSet::from_labels(item.gold_labels);
            if (!gold || gold->empty()) {
                bad_gold = true;
                records[i] = std::move(rec);
                continue;
            }

            model::ChatRequest req = render_answer_prompt(item, config.max_tokens);
            std::optional<LabelSet> parsed;
            for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
                if (attempt > 0) rec.retries++;
                auto reply = client.send(req);
                if (!reply.ok()) {
                    rec.raw = "";
                    continue;
                }
                rec.raw = reply.value();
                auto labels = parse_answer(rec.raw);
                if (labels.ok()) {
                    parsed = labels.value();
                    break;
                }
            }
            if (parsed) {
                rec.parsed = *parsed;
                rec.score = score_instance(*gold, parsed).value();
            } else {
                rec.parse_failed = true;
                rec.exhausted_retries = true;
                rec.score = InstanceScore{};
            }
            records[i] = std::move(rec);
        }
    };

    int n_threads = std::max(1, std::min<int>(config.concurrency,
                                              static_cast<int>(items.size())));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (bad_gold) {
        return Error{Errc::empty_gold, "benchmark contains an item with an invalid gold set"};
    }
    return records;
}

EvalReport build_report(const std::vector<EvalRecord>& records) {
    EvalReport report;
    report.items = records.size();
    std::vector<std::pair<std::string, InstanceScore>> by_family, by_subject;
    for (const auto& r : records) {
        by_family.emplace_back(r.family, r.score);
        by_subject.emplace_back(r.subject.empty() ? "unknown" : r.subject, r.score);
        if (r.parse_failed) report.parse_failures++;
        if (r.exhausted_retries) report.exhausted++;
        report.total_retries += static_cast<size_t>(r.retries);
    }
    if (!records.empty()) {
        report.by_family = aggregate(by_family).value();
        report.by_subject = aggregate(by_subject).value();
    }
    return report;
}

namespace {

nlohmann::json aggregate_to_json(const AggregateReport& agg) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [group, g] : agg.by_group) {
        doc[group] = {{"count", g.count}, {"em", g.em}, {"f1", g.f1}};
    }
    doc["overall"] = {{"count", agg.overall.count},
                      {"em", agg.overall.em},
                      {"f1", agg.overall.f1}};
    return doc;
}

void append_table(std::string& out, const char* heading, const AggregateReport& agg) {
    char line[160];
    out += std::string("## ") + heading + "\n\n";
    out += "| Group | N | EM | F1 |\n|---|---|---|---|\n";
    for (const auto& [group, g] : agg.by_group) {
        snprintf(line, sizeof(line), "| %s | %zu | %.1f | %.1f |\n", group.c_str(), g.count,
                 g.em * 100.0, g.f1 * 100.0);
        out += line;
    }
    snprintf(line, sizeof(line), "| **Overall** | %zu | %.1f | %.1f |\n", agg.overall.count,
             agg.overall.em * 100.0, agg.overall.f1 * 100.0);
    out += line;
    out += "\n";
}

} // namespace

nlohmann::json EvalReport::to_json() const {
    nlohmann::json doc;
    doc["items"] = items;
    doc["parse_failures"] = parse_failures;
    doc["exhausted_retries"] = exhausted;
    doc["total_retries"] = total_retries;
    doc["by_family"] = aggregate_to_json(by_family);
    doc["by_subject"] = aggregate_to_json(by_subject);
    return doc;
}

std::string EvalReport::to_markdown() const {
    std::string out;
    append_table(out, "Results by task family", by_family);
    append_table(out, "Results by subject", by_subject);
    char line[120];
    snprintf(line, sizeof(line), "Items: %zu, parse failures: %zu, retries: %zu\n", items,
             parse_failures, total_retries);
    out += line;
    return out;
}

} // namespace kgforge::eval
