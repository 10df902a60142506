#include "kgforge/bench/similarity.hpp"

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include <cstdio>

#include "kgforge/core/ngram.hpp"

namespace kgforge::bench {

double default_similarity(const std::string& a, const std::string& b) {
    return char_ngram_cosine(a, b, 3);
}

Result<double> HttpSimilarity::score(const std::string& a, const std::string& b) {
    httplib::Client client(endpoint_);
    client.set_read_timeout(30, 0);
    client.set_connection_timeout(5, 0);
    nlohmann::json body = {{"text_a", a}, {"text_b", b}};
    auto res = client.Post("/similarity", body.dump(), "application/json");
    if (!res || res->status != 200) {
        return Error{Errc::provider_failure, "similarity service unavailable: " + endpoint_};
    }
    nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("score") || !doc["score"].is_number()) {
        return Error{Errc::provider_failure, "malformed similarity response"};
    }
    double v = doc["score"].get<double>();
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

Result<double> FallbackSimilarity::score(const std::string& a, const std::string& b) {
    if (!degraded_) {
        auto r = primary_->score(a, b);
        if (r.ok()) return r;
        degraded_ = true;
        fprintf(stderr, "warning: similarity provider '%s' failed (%s); using %s\n",
                primary_->id().c_str(), r.error().to_string().c_str(), fallback_.id().c_str());
    }
    return fallback_.score(a, b);
}

} // namespace kgforge::bench
