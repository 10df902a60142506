#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "kgforge/core/hash.hpp"
#include "kgforge/core/text.hpp"

namespace kgforge {

// Precomputed n-gram count vector: sorted (gram hash, count) pairs plus the
// Euclidean norm. Grams are hashed; the chance of distinct grams colliding
// is negligible for similarity scoring.
struct GramVector {
    std::vector<std::pair<uint64_t, int>> grams;
    double norm = 0.0;
    size_t codepoints = 0;
    std::string text;
};

inline GramVector make_gram_vector(std::string_view s, size_t n = 3) {
    GramVector v;
    v.text = std::string(s);
    auto cps = text::decode_utf8(s);
    v.codepoints = cps.size();
    if (cps.size() < n) return v;
    v.grams.reserve(cps.size() - n + 1);
    for (size_t i = 0; i + n <= cps.size(); ++i) {
        std::string gram;
        for (size_t j = 0; j < n; ++j) text::append_utf8(gram, cps[i + j]);
        v.grams.emplace_back(fnv1a64(gram), 1);
    }
    std::sort(v.grams.begin(), v.grams.end());
    size_t out = 0;
    for (size_t i = 0; i < v.grams.size(); ++i) {
        if (out > 0 && v.grams[out - 1].first == v.grams[i].first) {
            v.grams[out - 1].second++;
        } else {
            v.grams[out++] = v.grams[i];
        }
    }
    v.grams.resize(out);
    double sq = 0.0;
    for (const auto& [g, c] : v.grams) sq += double(c) * c;
    v.norm = std::sqrt(sq);
    return v;
}

// Texts shorter than n codepoints (for either side) fall back to exact
// equality: 1 or 0, with two empty strings scoring 0.
inline double gram_cosine(const GramVector& a, const GramVector& b, size_t n = 3) {
    if (a.codepoints < n || b.codepoints < n) {
        return (!a.text.empty() && a.text == b.text) ? 1.0 : 0.0;
    }
    if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
    double dot = 0.0;
    size_t i = 0, j = 0;
    while (i < a.grams.size() && j < b.grams.size()) {
        if (a.grams[i].first < b.grams[j].first) {
            ++i;
        } else if (a.grams[i].first > b.grams[j].first) {
            ++j;
        } else {
            dot += double(a.grams[i].second) * b.grams[j].second;
            ++i;
            ++j;
        }
    }
    return dot / (a.norm * b.norm);
}

// Cosine similarity of character n-gram count vectors (codepoint-level).
inline double char_ngram_cosine(std::string_view a, std::string_view b, size_t n = 3) {
    return gram_cosine(make_gram_vector(a, n), make_gram_vector(b, n), n);
}

} // namespace kgforge
