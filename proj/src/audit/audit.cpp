#include "kgforge/audit/audit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "kgforge/core/hash.hpp"
#include "kgforge/core/text.hpp"

namespace kgforge::audit {

Result<AgreementTable> parse_agreement_csv(const std::string& text) {
    AgreementTable table;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        std::vector<int> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stoi(text::trim(cell)));
            } catch (...) {
                return Error{Errc::malformed_document, "non-integer cell '" + cell + "'"};
            }
        }
        if (!row.empty()) table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) {
        return Error{Errc::malformed_document, "agreement table is empty"};
    }
    return table;
}

Result<double> fleiss_kappa(const AgreementTable& table) {
    if (table.rows.empty() || table.rows[0].size() < 2) {
        return Error{Errc::ragged_table, "table needs >= 1 item and >= 2 categories"};
    }
    const size_t n_cats = table.rows[0].size();
    int r = 0;
    for (int c : table.rows[0]) r += c;
    if (r < 2) return Error{Errc::too_few_annotators, "need at least 2 annotators"};

    for (const auto& row : table.rows) {
        if (row.size() != n_cats) {
            return Error{Errc::ragged_table, "rows have differing category counts"};
        }
        int sum = 0;
        for (int c : row) {
            if (c < 0) return Error{Errc::ragged_table, "negative vote count"};
            sum += c;
        }
        if (sum != r) {
            return Error{Errc::ragged_table, "rows have differing annotator counts"};
        }
    }

    const double n = static_cast<double>(table.rows.size());
    double p_bar = 0.0;
    for (const auto& row : table.rows) {
        double sum_sq = 0.0;
        for (int c : row) sum_sq += static_cast<double>(c) * c;
        p_bar += (sum_sq - r) / (static_cast<double>(r) * (r - 1));
    }
    p_bar /= n;

    double p_e = 0.0;
    for (size_t j = 0; j < n_cats; ++j) {
        double marginal = 0.0;
        for (const auto& row : table.rows) marginal += row[j];
        marginal /= n * r;
        p_e += marginal * marginal;
    }
    if (1.0 - p_e == 0.0) {
        // all mass on a single category: perfect but chance-saturated
        return 1.0;
    }
    return (p_bar - p_e) / (1.0 - p_e);
}

Result<std::vector<SampleItem>> stratified_sample(const std::vector<SampleItem>& items,
                                                  double fraction, uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0) {
        return Error{Errc::config_error, "fraction must be in (0, 1]"};
    }
    std::map<std::string, std::vector<SampleItem>> strata;
    for (const auto& item : items) strata[item.stratum].push_back(item);

    std::vector<SampleItem> out;
    for (auto& [key, members] : strata) {
        std::sort(members.begin(), members.end(),
                  [](const SampleItem& a, const SampleItem& b) { return a.id < b.id; });
        size_t take = static_cast<size_t>(std::lround(fraction * members.size()));
        take = std::max<size_t>(take, 1);
        take = std::min(take, members.size());
        Rng rng = keyed_rng(seed, "stratum/" + key);
        rng.shuffle(members);
        members.resize(take);
        out.insert(out.end(), members.begin(), members.end());
    }
    std::sort(out.begin(), out.end(), [](const SampleItem& a, const SampleItem& b) {
        return std::tie(a.stratum, a.id) < std::tie(b.stratum, b.id);
    });
    return out;
}

nlohmann::json OverlapStats::to_json() const {
    return {{"grams_a", grams_a},
            {"grams_b", grams_b},
            {"shared", shared},
            {"jaccard", jaccard},
            {"max_containment", max_containment},
            {"mean_containment", mean_containment}};
}

OverlapStats ngram_overlap(const std::vector<std::string>& corpus_a,
                           const std::vector<std::string>& corpus_b, size_t n) {
    std::set<std::string> grams_a, grams_b;
    for (const auto& doc : corpus_a) {
        for (auto& g : text::char_ngrams(doc, n)) grams_a.insert(std::move(g));
    }
    std::vector<std::set<std::string>> docs_b;
    for (const auto& doc : corpus_b) {
        std::set<std::string> grams;
        for (auto& g : text::char_ngrams(doc, n)) grams.insert(std::move(g));
        for (const auto& g : grams) grams_b.insert(g);
        docs_b.push_back(std::move(grams));
    }

    OverlapStats stats;
    stats.grams_a = grams_a.size();
    stats.grams_b = grams_b.size();
    for (const auto& g : grams_b) {
        if (grams_a.count(g)) stats.shared++;
    }
    size_t union_size = grams_a.size() + grams_b.size() - stats.shared;
    stats.jaccard = union_size == 0 ? 1.0 : static_cast<double>(stats.shared) / union_size;

    double sum = 0.0;
    size_t counted = 0;
    for (const auto& grams : docs_b) {
        if (grams.empty()) continue;
        size_t hit = 0;
        for (const auto& g : grams) {
            if (grams_a.count(g)) ++hit;
        }
        double containment = static_cast<double>(hit) / grams.size();
        stats.max_containment = std::max(stats.max_containment, containment);
        sum += containment;
        ++counted;
    }
    stats.mean_containment = counted == 0 ? 0.0 : sum / counted;
    return stats;
}

} // namespace kgforge::audit
