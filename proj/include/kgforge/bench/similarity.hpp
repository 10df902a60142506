#pragma once

#include <memory>
#include <string>

#include "kgforge/core/error.hpp"

namespace kgforge::bench {

// Character 3-gram cosine over codepoints; texts shorter than 3 codepoints
// compare by exact equality. Deterministic, offline, symmetric.
double default_similarity(const std::string& a, const std::string& b);

class SimilarityProvider {
public:
    virtual ~SimilarityProvider() = default;
    virtual Result<double> score(const std::string& a, const std::string& b) = 0;
    virtual std::string id() const = 0;
};

class NgramSimilarity : public SimilarityProvider {
public:
    Result<double> score(const std::string& a, const std::string& b) override {
        return default_similarity(a, b);
    }
    std::string id() const override { return "ngram"; }
};

// POST {endpoint}/similarity with {"text_a","text_b"} -> {"score": x}.
class HttpSimilarity : public SimilarityProvider {
public:
    explicit HttpSimilarity(std::string endpoint) : endpoint_(std::move(endpoint)) {}
    Result<double> score(const std::string& a, const std::string& b) override;
    std::string id() const override { return "http"; }

private:
    std::string endpoint_;
};

// Delegates to the primary provider and drops to the n-gram default on the
// first failure, with a warning recorded.
class FallbackSimilarity : public SimilarityProvider {
public:
    explicit FallbackSimilarity(std::unique_ptr<SimilarityProvider> primary)
        : primary_(std::move(primary)) {}

    Result<double> score(const std::string& a, const std::string& b) override;
    std::string id() const override { return degraded_ ? fallback_.id() : primary_->id(); }
    bool degraded() const { return degraded_; }

private:
    std::unique_ptr<SimilarityProvider> primary_;
    NgramSimilarity fallback_;
    bool degraded_ = false;
};

} // namespace kgforge::bench
