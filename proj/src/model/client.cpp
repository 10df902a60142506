#include "kgforge/model/client.hpp"

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include "kgforge/core/hash.hpp"

namespace kgforge::model {

uint64_t prompt_hash(const ChatRequest& req) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& m : req.messages) {
        h = fnv1a64(m.role, h);
        h = fnv1a64("\x1f", h);
        h = fnv1a64(m.content, h);
        h = fnv1a64("\x1e", h);
    }
    return h;
}

namespace {

std::string rendered(const ChatRequest& req) {
    std::string out;
    for (const auto& m : req.messages) {
        out += m.role;
        out += ":\n";
        out += m.content;
        out += "\n";
    }
    return out;
}

} // namespace

StubModelClient::StubModelClient(uint64_t seed, Responder default_responder)
    : seed_(seed), default_responder_(std::move(default_responder)) {}

void StubModelClient::can_response(uint64_t hash, std::string response) {
    std::lock_guard lock(mu_);
    canned_[hash].push_back(std::move(response));
}

void StubModelClient::can_response_containing(std::string needle, std::string response) {
    std::lock_guard lock(mu_);
    contains_.emplace_back(std::move(needle), std::move(response));
}

void StubModelClient::fail_next(int n) {
    std::lock_guard lock(mu_);
    fail_budget_ = n;
}

Result<std::string> StubModelClient::send(const ChatRequest& req) {
    uint64_t h = prompt_hash(req);
    std::lock_guard lock(mu_);
    if (fail_budget_ > 0) {
        --fail_budget_;
        return Error{Errc::client_failure, "stub failure injection"};
    }
    if (auto it = canned_.find(h); it != canned_.end() && !it->second.empty()) {
        std::string r = it->second.front();
        if (it->second.size() > 1) it->second.erase(it->second.begin());
        return r;
    }
    if (!contains_.empty()) {
        std::string text = rendered(req);
        for (const auto& [needle, response] : contains_) {
            if (text.find(needle) != std::string::npos) return response;
        }
    }
    if (default_responder_) return default_responder_(req, h, seed_);
    return "stub-" + std::to_string(h);
}

HttpModelClient::HttpModelClient(std::string endpoint, std::string model_name, std::string api_key)
    : endpoint_(std::move(endpoint)), model_(std::move(model_name)),
      api_key_(std::move(api_key)) {}

Result<std::string> HttpModelClient::send(const ChatRequest& req) {
    httplib::Client client(endpoint_);
    client.set_read_timeout(120, 0);
    client.set_connection_timeout(10, 0);

    nlohmann::json body;
    body["model"] = model_;
    body["temperature"] = req.params.temperature;
    body["top_p"] = req.params.top_p;
    body["max_tokens"] = req.params.max_tokens;
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    body["messages"] = std::move(messages);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
        return Error{Errc::client_failure, "no response from " + endpoint_};
    }
    if (res->status != 200) {
        return Error{Errc::client_failure,
                     "HTTP " + std::to_string(res->status) + " from " + endpoint_};
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
        return Error{Errc::client_failure, "malformed completion response"};
    }
    const auto& choice = doc["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content")) {
        return Error{Errc::client_failure, "completion response missing message content"};
    }
    return choice["message"]["content"].get<std::string>();
}

StubModelClient::Responder answer_stub_responder() {
    return [](const ChatRequest&, uint64_t hash, uint64_t seed) {
        // one of the 15 non-empty subsets of {A,B,C,D}, stable per prompt
        unsigned mask = 1u + static_cast<unsigned>(hash_combine(seed, hash) % 15u);
        std::string out;
        const char* labels = "ABCD";
        for (int b = 0; b < 4; ++b) {
            if (mask & (1u << b)) {
                if (!out.empty()) out += ',';
                out += labels[b];
            }
        }
        return out;
    };
}

StubModelClient::Responder judge_stub_responder() {
    return [](const ChatRequest&, uint64_t, uint64_t) { return std::string("VALID"); };
}

StubModelClient::Responder extraction_stub_responder() {
    return [](const ChatRequest&, uint64_t hash, uint64_t seed) {
        char tag[17];
        snprintf(tag, sizeof(tag), "%016llx",
                 static_cast<unsigned long long>(hash_combine(seed, hash)));
        nlohmann::json doc;
        doc["schema_version"] = "1";
        doc["nodes"] = nlohmann::json::array(
            {{{"local_id", "n1"},
              {"kind", "Concept"},
              {"name", std::string("stub concept ") + tag},
              {"props",
               {{"definition", std::string("placeholder definition ") + tag},
                {"importance", "understand"}}}}});
        doc["edges"] = nlohmann::json::array();
        return doc.dump();
    };
}

Result<std::string> strip_code_fences(const std::string& raw) {
    size_t b = raw.find_first_not_of(" \t\r\n");
    if (b == std::string::npos || raw.compare(b, 3, "```") != 0) {
        return Error{Errc::malformed, "no code fence to strip"};
    }
    size_t first_newline = raw.find('\n', b);
    size_t last_fence = raw.rfind("```");
    if (first_newline == std::string::npos || last_fence <= first_newline) {
        return Error{Errc::malformed, "unterminated code fence"};
    }
    return raw.substr(first_newline + 1, last_fence - first_newline - 1);
}

StubModelClient::Responder qa_stub_responder() {
    return [](const ChatRequest&, uint64_t hash, uint64_t seed) {
        char tag[17];
        snprintf(tag, sizeof(tag), "%016llx",
                 static_cast<unsigned long long>(hash_combine(seed, hash)));
        nlohmann::json pair = {{"question", std::string("What does item ") + tag + " describe?"},
                               {"answer", std::string("It describes stub content ") + tag + "."}};
        return nlohmann::json::array({pair}).dump();
    };
}

} // namespace kgforge::model
