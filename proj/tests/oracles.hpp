#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive: adjacency lists as plain maps,
// O(V*E) reachability, exhaustive enumeration. Keep these free of any
// kgforge graph/bench/eval code paths they are meant to verify.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracles {

using AdjList = std::map<std::string, std::set<std::string>>;

// All nodes reachable from start via >= 1 edge (plain DFS).
inline std::set<std::string> reachable(const AdjList& adj, const std::string& start) {
    std::set<std::string> seen;
    std::vector<std::string> stack;
    if (auto it = adj.find(start); it != adj.end()) {
        for (const auto& n : it->second) stack.push_back(n);
    }
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (!seen.insert(cur).second) continue;
        if (auto it = adj.find(cur); it != adj.end()) {
            for (const auto& n : it->second) stack.push_back(n);
        }
    }
    return seen;
}

// Transitive predecessors of `target` (reachability on the reversed graph).
inline std::set<std::string> ancestors(const AdjList& adj, const std::string& target) {
    AdjList rev;
    for (const auto& [src, outs] : adj) {
        for (const auto& dst : outs) rev[dst].insert(src);
    }
    return reachable(rev, target);
}

// Out-neighborhood of q in the transitive reduction of a DAG: edge q->b is
// kept iff b is not reachable from any other out-neighbor of q.
inline std::set<std::string> reduction_successors(const AdjList& adj, const std::string& q) {
    std::set<std::string> direct;
    if (auto it = adj.find(q); it != adj.end()) direct = it->second;
    std::set<std::string> kept;
    for (const auto& b : direct) {
        bool shortcut = false;
        for (const auto& a : direct) {
            if (a == b) continue;
            if (reachable(adj, a).count(b)) {
                shortcut = true;
                break;
            }
        }
        if (!shortcut) kept.insert(b);
    }
    return kept;
}

// Kahn's algorithm; returns true iff a full topological order exists.
inline bool kahn_is_dag(const AdjList& adj, const std::set<std::string>& nodes) {
    std::map<std::string, int> indeg;
    for (const auto& n : nodes) indeg[n] = 0;
    for (const auto& [src, outs] : adj) {
        for (const auto& dst : outs) indeg[dst]++;
    }
    std::vector<std::string> queue;
    for (const auto& [n, d] : indeg) {
        if (d == 0) queue.push_back(n);
    }
    size_t emitted = 0;
    while (!queue.empty()) {
        std::string cur = queue.back();
        queue.pop_back();
        ++emitted;
        if (auto it = adj.find(cur); it != adj.end()) {
            for (const auto& n : it->second) {
                if (--indeg[n] == 0) queue.push_back(n);
            }
        }
    }
    return emitted == nodes.size();
}

// --- multi-label metric oracles ---------------------------------------------

// Label sets as bitmasks over {A,B,C,D}: bit 0 = A ... bit 3 = D.
inline int popcount4(unsigned m) { return __builtin_popcount(m & 0xF); }

inline double f1_direct(unsigned gold, unsigned pred) {
    int inter = popcount4(gold & pred);
    int total = popcount4(gold) + popcount4(pred);
    if (inter == 0) return 0.0;
    return 2.0 * inter / total;
}

// Expected F1 of a uniform draw over the 15 non-empty subsets, for a gold
// set of cardinality k (canonical gold = lowest k bits).
inline double expected_f1_enumeration(int k) {
    unsigned gold = (1u << k) - 1u;
    double sum = 0.0;
    for (unsigned s = 1; s <= 15; ++s) sum += f1_direct(gold, s);
    return sum / 15.0;
}

// --- agreement oracle --------------------------------------------------------

// Fleiss' kappa via explicit annotator pairs: P_bar = mean over items of the
// fraction of agreeing annotator pairs; P_e from category marginals.
inline double fleiss_kappa_pairwise(const std::vector<std::vector<int>>& table) {
    size_t n_items = table.size();
    size_t n_cats = table[0].size();
    int r = 0;
    for (int c : table[0]) r += c;

    double p_bar = 0.0;
    for (const auto& row : table) {
        int agree_pairs = 0;
        for (int c : row) agree_pairs += c * (c - 1) / 2;
        int all_pairs = r * (r - 1) / 2;
        p_bar += static_cast<double>(agree_pairs) / all_pairs;
    }
    p_bar /= static_cast<double>(n_items);

    double pe = 0.0;
    for (size_t j = 0; j < n_cats; ++j) {
        double pj = 0.0;
        for (const auto& row : table) pj += row[j];
        pj /= static_cast<double>(n_items * r);
        pe += pj * pj;
    }
    if (1.0 - pe == 0.0) return 1.0;
    return (p_bar - pe) / (1.0 - pe);
}

} // namespace oracles
