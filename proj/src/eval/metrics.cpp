#include "kgforge/eval/metrics.hpp"

#include <numeric>

#include "kgforge/core/hash.hpp"
#include "kgforge/core/text.hpp"

namespace kgforge::eval {

std::optional<LabelSet> LabelSet::from_labels(const std::vector<std::string>& labels) {
    LabelSet s;
    for (const auto& l : labels) {
        if (l.size() != 1 || l[0] < 'A' || l[0] > 'D') return std::nullopt;
        s.add(l[0]);
    }
    return s;
}

std::string LabelSet::to_string() const {
    std::string out;
    for (char c = 'A'; c <= 'D'; ++c) {
        if (contains(c)) {
            if (!out.empty()) out += ',';
            out += c;
        }
    }
    return out;
}

std::vector<std::string> LabelSet::labels() const {
    std::vector<std::string> out;
    for (char c = 'A'; c <= 'D'; ++c) {
        if (contains(c)) out.emplace_back(1, c);
    }
    return out;
}

Result<LabelSet> parse_answer(const std::string& raw) {
    LabelSet set;
    for (uint32_t cp : text::decode_utf8(raw)) {
        if (text::is_space(cp)) continue;
        cp = text::fold_width(cp); // full-width letters and commas fold to ASCII
        // common delimiter variants; U+3001 is the ideographic comma
        if (cp == ',' || cp == ';' || cp == 0x3001) continue;
        uint32_t upper = (cp >= 'a' && cp <= 'z') ? cp - 32 : cp;
        if (upper >= 'A' && upper <= 'D') {
            set.add(static_cast<char>(upper));
            continue;
        }
        return Error{Errc::parse_failure,
                     "unexpected character in answer: '" + raw + "'"};
    }
    if (set.empty()) {
        return Error{Errc::parse_failure, "no labels found in answer: '" + raw + "'"};
    }
    return set;
}

Result<InstanceScore> score_instance(const LabelSet& gold, const std::optional<LabelSet>& pred) {
    if (gold.empty()) return Error{Errc::empty_gold, "gold label set is empty"};
    InstanceScore s;
    if (!pred || pred->empty()) return s;

    unsigned inter = gold.mask() & pred->mask();
    int ni = __builtin_popcount(inter);
    s.em = (gold.mask() == pred->mask()) ? 1 : 0;
    s.precision = static_cast<double>(ni) / static_cast<double>(pred->size());
    s.recall = static_cast<double>(ni) / static_cast<double>(gold.size());
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

Result<AggregateReport> aggregate(
    const std::vector<std::pair<std::string, InstanceScore>>& scored) {
    AggregateReport report;
    if (scored.empty()) return Error{Errc::empty_group, "nothing to aggregate"};
    for (const auto& [group, score] : scored) {
        auto& agg = report.by_group[group];
        agg.count++;
        agg.em += score.em;
        agg.f1 += score.f1;
    }
    double total_em = 0.0, total_f1 = 0.0;
    size_t total = 0;
    for (auto& [group, agg] : report.by_group) {
        if (agg.count == 0) return Error{Errc::empty_group, "empty group '" + group + "'"};
        total_em += agg.em;
        total_f1 += agg.f1;
        total += agg.count;
        agg.em /= static_cast<double>(agg.count);
        agg.f1 /= static_cast<double>(agg.count);
    }
    report.overall.count = total;
    report.overall.em = total_em / static_cast<double>(total);
    report.overall.f1 = total_f1 / static_cast<double>(total);
    return report;
}

std::string random_em_percent() {
    char buf[16];
    snprintf(buf, sizeof(buf), "%.1f", random_em_expectation() * 100.0);
    return buf;
}

Result<Rational> random_f1_expectation(int k) {
    if (k < 1 || k > 4) return Error{Errc::invalid_k, "gold cardinality must be in 1..4"};
    // enumerate all 15 non-empty predictions against a canonical gold of size k;
    // per-instance F1 = 2|G∩S| / (|G|+|S|), summed as exact fractions
    unsigned gold = (1u << k) - 1u;
    long long num = 0, den = 1;
    for (unsigned s = 1; s <= 15; ++s) {
        int inter = __builtin_popcount(gold & s);
        if (inter == 0) continue;
        long long n = 2 * inter;
        long long d = k + __builtin_popcount(s);
        // num/den += n/d
        num = num * d + n * den;
        den *= d;
        long long g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    den *= 15;
    long long g = std::gcd(num, den);
    return Rational{num / g, den / g};
}

BaselineEstimate monte_carlo_baseline(const std::vector<LabelSet>& golds, size_t trials,
                                      uint64_t seed) {
    BaselineEstimate est;
    if (golds.empty() || trials == 0) return est;
    double em_sum = 0.0, f1_sum = 0.0;
    size_t idx = 0;
    for (const LabelSet& gold : golds) {
        Rng rng = keyed_rng(seed, "baseline/" + std::to_string(idx++));
        for (size_t t = 0; t < trials; ++t) {
            LabelSet pred(static_cast<unsigned>(1 + rng.below(15)));
            auto s = score_instance(gold, pred);
            em_sum += s.value().em;
            f1_sum += s.value().f1;
        }
    }
    double n = static_cast<double>(golds.size() * trials);
    est.em = em_sum / n;
    est.f1 = f1_sum / n;
    return est;
}

} // namespace kgforge::eval
