#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kgforge/core/error.hpp"

namespace kgforge::model {

struct ChatMessage {
    std::string role; // "system" | "user"
    std::string content;
};

struct DecodingParams {
    double temperature = 0.0;
    double top_p = 1.0;
    int max_tokens = 1024;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    DecodingParams params;
};

// Stable key for a request; stub responses and generation metadata hang off it.
uint64_t prompt_hash(const ChatRequest& req);

class ModelClient {
public:
    virtual ~ModelClient() = default;

    // Safe for concurrent use with bounded in-flight requests.
    virtual Result<std::string> send(const ChatRequest& req) = 0;

    virtual std::string id() const = 0;
};

// Deterministic offline client. Responses are either canned (keyed by prompt
// hash, consumed as a sequence) or produced by a responder derived from
// (seed, prompt hash). Bit-identical output for a fixed seed.
class StubModelClient : public ModelClient {
public:
    using Responder = std::function<std::string(const ChatRequest&, uint64_t hash, uint64_t seed)>;

    explicit StubModelClient(uint64_t seed = 0, Responder default_responder = {});

    void can_response(uint64_t hash, std::string response);
    // convenience: matches any request whose rendered prompt contains `needle`
    void can_response_containing(std::string needle, std::string response);
    void fail_next(int n); // next n sends return ClientFailure

    Result<std::string> send(const ChatRequest& req) override;
    std::string id() const override { return "stub"; }
    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
    Responder default_responder_;
    std::map<uint64_t, std::vector<std::string>> canned_;
    std::vector<std::pair<std::string, std::string>> contains_;
    int fail_budget_ = 0;
    std::mutex mu_;
};

// OpenAI-style chat endpoint: POST {endpoint}/v1/chat/completions.
class HttpModelClient : public ModelClient {
public:
    HttpModelClient(std::string endpoint, std::string model_name, std::string api_key = {});

    Result<std::string> send(const ChatRequest& req) override;
    std::string id() const override { return "http:" + model_; }

private:
    std::string endpoint_;
    std::string model_;
    std::string api_key_;
};

// Default stub behaviors for the pipeline stages.
StubModelClient::Responder answer_stub_responder();     // valid label sets
StubModelClient::Responder judge_stub_responder();      // always VALID
StubModelClient::Responder extraction_stub_responder(); // minimal extraction JSON
StubModelClient::Responder qa_stub_responder();         // one QA pair as JSON

// Model reply -> JSON: strict parse first, then one salvage pass stripping
// markdown code fences. Anything else is a hard error.
Result<std::string> strip_code_fences(const std::string& raw);

} // namespace kgforge::model
