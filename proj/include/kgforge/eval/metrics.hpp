#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgforge/core/error.hpp"

namespace kgforge::eval {

// Subset of {A,B,C,D} stored as a 4-bit mask, rendered sorted ascending.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(unsigned mask) : mask_(mask & 0xF) {}

    static std::optional<LabelSet> from_labels(const std::vector<std::string>& labels);

    void add(char label) {
        if (label >= 'A' && label <= 'D') mask_ |= 1u << (label - 'A');
    }
    bool contains(char label) const {
        return label >= 'A' && label <= 'D' && (mask_ & (1u << (label - 'A')));
    }
    unsigned mask() const { return mask_; }
    size_t size() const { return static_cast<size_t>(__builtin_popcount(mask_)); }
    bool empty() const { return mask_ == 0; }

    std::string to_string() const; // "A,C"
    std::vector<std::string> labels() const;

    bool operator==(const LabelSet&) const = default;

private:
    unsigned mask_ = 0;
};

// Answer-string normalization: strip whitespace, unify delimiter variants,
// fold width, uppercase; anything left that is not a label is a ParseFailure,
// with no semantic repair. An answer with no labels at all also fails.
Result<LabelSet> parse_answer(const std::string& raw);

struct InstanceScore {
    int em = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Per-instance exact match and set precision/recall/F1; a failed or empty
// prediction scores zero across the board. Gold must be non-empty.
Result<InstanceScore> score_instance(const LabelSet& gold, const std::optional<LabelSet>& pred);

struct GroupAggregate {
    size_t count = 0;
    double em = 0.0;
    double f1 = 0.0;
};

struct AggregateReport {
    std::map<std::string, GroupAggregate> by_group;
    GroupAggregate overall; // instance-count-weighted across groups
};

// Group means are plain averages over instances; the overall row weights
// groups by instance count, which equals the global instance mean.
Result<AggregateReport> aggregate(
    const std::vector<std::pair<std::string, InstanceScore>>& scored);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

// Uniform draw over the 15 non-empty subsets of {A,B,C,D}.
inline double random_em_expectation() { return 1.0 / 15.0; }
std::string random_em_percent(); // "6.7"

// Exact expectation of F1 for gold cardinality k, as a reduced rational.
Result<Rational> random_f1_expectation(int k);

struct BaselineEstimate {
    double em = 0.0;
    double f1 = 0.0;
};

// Samples `trials` uniform non-empty predictions per gold set.
BaselineEstimate monte_carlo_baseline(const std::vector<LabelSet>& golds, size_t trials,
                                      uint64_t seed);

} // namespace kgforge::eval
