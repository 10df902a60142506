#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgforge/core/error.hpp"

namespace kgforge::audit {

// N items x C categories of annotator-vote counts; every row sums to the
// same annotator count r.
struct AgreementTable {
    std::vector<std::vector<int>> rows;
};

// CSV of integers, one item per line, one category per column.
Result<AgreementTable> parse_agreement_csv(const std::string& text);

// Fleiss' kappa. Degenerate tables with all mass on one category return 1.0
// rather than NaN.
Result<double> fleiss_kappa(const AgreementTable& table);

struct SampleItem {
    std::string id;
    std::string stratum;
};

// Per-stratum size = round(fraction * stratum size), minimum 1 for non-empty
// strata; uniform without replacement under the seed. Output sorted by
// (stratum, id).
Result<std::vector<SampleItem>> stratified_sample(const std::vector<SampleItem>& items,
                                                  double fraction, uint64_t seed);

struct OverlapStats {
    size_t grams_a = 0;
    size_t grams_b = 0;
    size_t shared = 0;
    double jaccard = 0.0;
    // max over documents of B of the fraction of its n-grams found in A
    double max_containment = 0.0;
    double mean_containment = 0.0;

    nlohmann::json to_json() const;
};

// Codepoint-level n-gram overlap between two corpora (one string per
// document). Two empty gram sets count as identical.
OverlapStats ngram_overlap(const std::vector<std::string>& corpus_a,
                           const std::vector<std::string>& corpus_b, size_t n);

} // namespace kgforge::audit
