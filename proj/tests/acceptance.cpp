// Acceptance suite: prints one pass/fail line per criterion and exits with
// the number of failures. Criteria marked with runtimes are timed here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "kgforge/audit/audit.hpp"
#include "kgforge/bench/generator.hpp"
#include "kgforge/core/jsonl.hpp"
#include "kgforge/eval/metrics.hpp"
#include "kgforge/fixture/synthetic.hpp"
#include "kgforge/graph/serialize.hpp"
#include "kgforge/ingest/extraction.hpp"
#include "kgforge/ingest/section_graph.hpp"
#include "kgforge/merge/merge.hpp"
#include "kgforge/pipeline/pipeline.hpp"
#include "kgforge/validate/validator.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace kgforge;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool ok, const std::string& detail = "") {
    printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what,
           detail.empty() ? "" : " — ", detail.c_str());
    fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// criteria 1-3: closed-form baselines and the metric oracle

void criterion_1() {
    auto t0 = Clock::now();
    bool exact = eval::random_em_expectation() == 1.0 / 15.0;
    bool printed = eval::random_em_percent() == "6.7";
    double elapsed = seconds_since(t0);
    report(1, "random EM expectation = 1/15, printed as 6.7%", exact && printed && elapsed < 0.001,
           "elapsed " + std::to_string(elapsed * 1000.0) + " ms");
}

void criterion_2() {
    auto t0 = Clock::now();
    const eval::Rational expected[] = {{49, 150}, {37, 75}, {209, 350}};
    bool ok = true;
    for (int k = 1; k <= 3; ++k) {
        auto r = eval::random_f1_expectation(k);
        if (!r.ok() || !(r.value() == expected[k - 1])) ok = false;
        if (!r.ok() ||
            std::abs(r.value().value() - oracles::expected_f1_enumeration(k)) > 1e-15) {
            ok = false;
        }
        eval::LabelSet gold(static_cast<unsigned>((1u << k) - 1u));
        auto est = eval::monte_carlo_baseline({gold}, 100000, 20260809 + k);
        if (std::abs(est.f1 - r.value().value()) > 0.005) ok = false;
        if (std::abs(est.em - 1.0 / 15.0) > 0.005) ok = false;
    }
    double elapsed = seconds_since(t0);
    report(2, "F1 expectations exact (49/150, 37/75, 209/350) and Monte Carlo within 0.005",
           ok && elapsed < 10.0, "elapsed " + std::to_string(elapsed) + " s");
}

void criterion_3() {
    bool ok = true;
    for (unsigned g = 1; g <= 15 && ok; ++g) {
        for (unsigned p = 0; p <= 15 && ok; ++p) {
            auto s = eval::score_instance(eval::LabelSet(g), eval::LabelSet(p));
            if (!s.ok() || s.value().f1 != oracles::f1_direct(g, p)) ok = false;
            if (s.ok() && s.value().em != (g == p ? 1 : 0)) ok = false;
        }
    }
    report(3, "score_instance equals 2|G∩P|/(|G|+|P|) on all 240 pairs, zero tolerance", ok);
}

// ---------------------------------------------------------------------------
// criteria 4-6 + 12 share one synthetic pipeline corpus

struct RawGraphView {
    // raw edge-list views, independent of the KnowledgeGraph query paths
    std::map<std::string, std::string> kind_of;
    std::map<std::string, std::string> name_of;
    std::map<std::string, nlohmann::json> props_of;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> out_by_kind;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> in_by_kind;
    oracles::AdjList prereq;
    std::map<std::string, std::string> section_chapter, chapter_book;

    static RawGraphView load(const fs::path& path) {
        RawGraphView v;
        auto text = jsonl::read_text_file(path);
        nlohmann::json doc = nlohmann::json::parse(text.value());
        for (const auto& n : doc["nodes"]) {
            std::string id = n["id"];
            v.kind_of[id] = n["kind"];
            v.name_of[id] = n.value("name", "");
            v.props_of[id] = n.value("props", nlohmann::json::object());
        }
        for (const auto& e : doc["edges"]) {
            std::string kind = e["kind"], src = e["source"], dst = e["target"];
            v.out_by_kind[kind].emplace_back(src, dst);
            v.in_by_kind[kind].emplace_back(dst, src);
            if (kind == "prerequisites_for") v.prereq[src].insert(dst);
            if (kind == "is_part_of") {
                if (v.kind_of[src] == "Section") v.section_chapter[src] = dst;
                if (v.kind_of[src] == "Chapter") v.chapter_book[src] = dst;
            }
        }
        return v;
    }

    std::set<std::string> targets(const std::string& kind, const std::string& src) const {
        std::set<std::string> out;
        if (auto it = out_by_kind.find(kind); it != out_by_kind.end()) {
            for (const auto& [s, t] : it->second) {
                if (s == src) out.insert(t);
            }
        }
        return out;
    }
    std::set<std::string> sources(const std::string& kind, const std::string& dst) const {
        std::set<std::string> out;
        if (auto it = in_by_kind.find(kind); it != in_by_kind.end()) {
            for (const auto& [d, s] : it->second) {
                if (d == dst) out.insert(s);
            }
        }
        return out;
    }

    // expected gold ids for (subtask, query), recomputed from raw edges
    std::set<std::string> expected_gold(const std::string& subtask,
                                        const std::string& query) const {
        std::set<std::string> gold;
        if (subtask == "ground_1") {
            for (const char* k : {"tests_concept", "tests_skill"}) {
                for (const auto& t : targets(k, query)) gold.insert(t);
            }
        } else if (subtask == "ground_2") {
            for (const char* k : {"tests_concept", "tests_skill"}) {
                for (const auto& s : sources(k, query)) gold.insert(s);
            }
        } else if (subtask == "prereq_1") {
            gold = oracles::ancestors(prereq, query);
        } else if (subtask == "prereq_2") {
            gold = oracles::reduction_successors(prereq, query);
        } else if (subtask == "neighbor") {
            for (const char* k : {"is_a", "relates_to"}) {
                for (const auto& t : targets(k, query)) gold.insert(t);
                for (const auto& s : sources(k, query)) gold.insert(s);
            }
        } else if (subtask == "evidence_1") {
            gold = sources("verifies", query);
        } else if (subtask == "evidence_2") {
            gold = targets("verifies", query);
        } else if (subtask == "locate_1") {
            // earliest anchored section under (book order, chapter order,
            // section order, id); gold is its chapter
            std::tuple<int64_t, int64_t, int64_t, std::string> best{INT64_MAX, INT64_MAX,
                                                                    INT64_MAX, ""};
            std::string best_chapter;
            for (const auto& section : targets("appears_in", query)) {
                auto ch = section_chapter.find(section);
                if (ch == section_chapter.end()) continue;
                auto bk = chapter_book.find(ch->second);
                if (bk == chapter_book.end()) continue;
                auto key = std::make_tuple(props_of.at(bk->second).value("order", int64_t{0}),
                                           props_of.at(ch->second).value("order", int64_t{0}),
                                           props_of.at(section).value("order", int64_t{0}),
                                           section);
                if (key < best) {
                    best = key;
                    best_chapter = ch->second;
                }
            }
            if (!best_chapter.empty()) gold.insert(best_chapter);
        } else if (subtask == "locate_2") {
            gold = sources("leads_to", query);
        }
        return gold;
    }
};

struct SharedRun {
    fs::path root;
    fs::path bench_a, train_a, bench_b, train_b, bench_seed2;
    fs::path certified;
    fs::path report;
    double pipeline_seconds = 0.0;
    bool ok = false;
    std::string error;
};

SharedRun run_shared_pipeline() {
    SharedRun run;
    run.root = fs::temp_directory_path() / "kgforge_acceptance";
    fs::remove_all(run.root);

    fixture::FixtureConfig fx;
    fx.seed = 42;
    auto corpus = fixture::write_corpus(fx, run.root / "corpus");
    if (!corpus.ok()) {
        run.error = corpus.error().to_string();
        return run;
    }

    auto config_for = [&](const fs::path& workdir, uint64_t seed) {
        pipeline::PipelineConfig config;
        config.seed = seed;
        config.workdir = workdir;
        config.manifests = corpus.value().manifests;
        config.extra_edges = corpus.value().extra_edges;
        return config;
    };

    auto t0 = Clock::now();
    auto first = pipeline::run_pipeline(config_for(run.root / "a", 42));
    run.pipeline_seconds = seconds_since(t0);
    if (!first.ok()) {
        run.error = first.error().to_string();
        return run;
    }
    auto second = pipeline::run_pipeline(config_for(run.root / "b", 42));
    if (!second.ok()) {
        run.error = second.error().to_string();
        return run;
    }
    auto reseeded = pipeline::run_pipeline(config_for(run.root / "c", 43));
    if (!reseeded.ok()) {
        run.error = reseeded.error().to_string();
        return run;
    }
    run.bench_a = first.value().bench_jsonl;
    run.train_a = first.value().train_jsonl;
    run.bench_b = second.value().bench_jsonl;
    run.train_b = second.value().train_jsonl;
    run.bench_seed2 = reseeded.value().bench_jsonl;
    run.certified = first.value().certified_graph;
    run.report = run.root / "a" / "bench_report.json";
    run.ok = true;
    return run;
}

void criterion_4(const SharedRun& run) {
    if (!run.ok) {
        report(4, "benchmark soundness oracle", false, run.error);
        return;
    }
    RawGraphView view = RawGraphView::load(run.certified);

    size_t node_count = view.kind_of.size();
    std::set<std::string> edge_kinds;
    for (const auto& [kind, edges] : view.out_by_kind) edge_kinds.insert(kind);

    auto lines = jsonl::read_file(run.bench_a);
    if (!lines.ok()) {
        report(4, "benchmark soundness oracle", false, lines.error().to_string());
        return;
    }
    std::set<std::string> subtasks_seen;
    size_t gold_checked = 0, distractor_checked = 0;
    bool sound = node_count >= 5000 && edge_kinds.size() == 9;
    std::string detail;
    for (const auto& line : lines.value()) {
        auto item = bench::BenchItem::from_json(line);
        if (!item.ok()) {
            sound = false;
            detail = "unparseable item";
            break;
        }
        const auto& it = item.value();
        subtasks_seen.insert(it.subtask);
        if (it.options.size() != 4 || it.k < 1 || it.k > 3 ||
            !std::is_sorted(it.gold_labels.begin(), it.gold_labels.end()) ||
            it.gold_labels.size() != static_cast<size_t>(it.k)) {
            sound = false;
            detail = "structural invariant violated: " + it.item_id;
            break;
        }
        auto expected = view.expected_gold(it.subtask, it.query_node);
        std::set<std::string> expected_norm_texts;
        for (const auto& id : expected) {
            auto name = view.name_of.find(id);
            if (name != view.name_of.end()) {
                expected_norm_texts.insert(merge::normalize_name(name->second));
            }
        }
        for (const auto& o : it.options) {
            if (o.is_gold) {
                if (!expected.count(o.node_id)) {
                    sound = false;
                    detail = "gold option not in re-derived gold: " + it.item_id;
                }
                ++gold_checked;
            } else {
                if (expected.count(o.node_id)) {
                    sound = false;
                    detail = "distractor in re-derived gold: " + it.item_id;
                }
                // excluded-gold members are barred by node id and by text
                if (expected_norm_texts.count(merge::normalize_name(o.text))) {
                    sound = false;
                    detail = "distractor text collides with gold: " + it.item_id;
                }
                ++distractor_checked;
            }
        }
        if (!sound) break;
    }
    if (subtasks_seen.size() != 9) {
        sound = false;
        detail = "only " + std::to_string(subtasks_seen.size()) + " subtasks emitted";
    }
    report(4, "benchmark soundness oracle over the synthetic graph", sound,
           detail.empty() ? std::to_string(node_count) + " nodes, " +
                                std::to_string(lines.value().size()) + " items, " +
                                std::to_string(gold_checked) + " gold + " +
                                std::to_string(distractor_checked) + " distractor checks"
                          : detail);
}

void criterion_5(const SharedRun& run) {
    if (!run.ok) {
        report(5, "balancing histograms", false, run.error);
        return;
    }
    auto text = jsonl::read_text_file(run.report);
    nlohmann::json doc = nlohmann::json::parse(text.value());
    bool ok = true;
    std::string detail;

    for (auto it = doc["per_subtask"].begin(); it != doc["per_subtask"].end(); ++it) {
        const std::string subtask = it.key();
        // label combinations are never feasibility-constrained: max-min <= 1
        std::map<int, std::map<std::string, size_t>> combos_by_k;
        for (auto c = (*it)["combo_histogram"].begin(); c != (*it)["combo_histogram"].end();
             ++c) {
            combos_by_k[static_cast<int>(c.key().size())][c.key()] = c.value();
        }
        for (const auto& [k, hist] : combos_by_k) {
            static const size_t combos_per_k[] = {0, 4, 6, 4};
            size_t max_count = 0, min_count = SIZE_MAX;
            size_t listed = 0;
            for (const auto& [combo, count] : hist) {
                max_count = std::max(max_count, count);
                min_count = std::min(min_count, count);
                ++listed;
            }
            if (listed < combos_per_k[k]) min_count = 0; // unused combos count zero
            if (max_count > min_count + 1) {
                ok = false;
                detail = subtask + " k=" + std::to_string(k) + " combo spread " +
                         std::to_string(max_count - min_count);
            }
        }

        // cardinalities: |n_a - n_b| <= 1 + #(items where exactly one of a,b
        // was feasible) — the least-used rule can only widen a gap past one
        // when feasibility forbids the lighter side
        std::map<int, size_t> chosen;
        std::map<std::pair<int, int>, size_t> one_sided;
        for (auto f = (*it)["feasibility"].begin(); f != (*it)["feasibility"].end(); ++f) {
            const std::string& mask = f.key();
            size_t mask_total = 0;
            for (auto kk = f.value().begin(); kk != f.value().end(); ++kk) {
                int k = std::stoi(kk.key());
                chosen[k] += kk.value().get<size_t>();
                mask_total += kk.value().get<size_t>();
            }
            for (int a = 1; a <= 3; ++a) {
                for (int b = a + 1; b <= 3; ++b) {
                    bool has_a = mask.find(static_cast<char>('0' + a)) != std::string::npos;
                    bool has_b = mask.find(static_cast<char>('0' + b)) != std::string::npos;
                    if (has_a != has_b) one_sided[{a, b}] += mask_total;
                }
            }
        }
        for (int a = 1; a <= 3; ++a) {
            for (int b = a + 1; b <= 3; ++b) {
                size_t na = chosen.count(a) ? chosen[a] : 0;
                size_t nb = chosen.count(b) ? chosen[b] : 0;
                size_t gap = na > nb ? na - nb : nb - na;
                if (gap > 1 + one_sided[{a, b}]) {
                    ok = false;
                    detail = subtask + " k-gap between " + std::to_string(a) + " and " +
                             std::to_string(b) + " is " + std::to_string(gap) +
                             " with slack " + std::to_string(1 + one_sided[{a, b}]);
                }
            }
        }
    }
    report(5, "label-combination and cardinality balancing within ±1 where feasible", ok,
           detail);
}

void criterion_6(const SharedRun& run) {
    if (!run.ok) {
        report(6, "pipeline determinism", false, run.error);
        return;
    }
    auto slurp = [](const fs::path& p) { return jsonl::read_text_file(p).value(); };
    bool identical = slurp(run.bench_a) == slurp(run.bench_b) &&
                     slurp(run.train_a) == slurp(run.train_b);
    bool seed_changes = slurp(run.bench_a) != slurp(run.bench_seed2);
    report(6, "same seed is byte-identical; a new seed changes the benchmark",
           identical && seed_changes);
}

// ---------------------------------------------------------------------------

void criterion_7() {
    bool ok = true;
    std::string detail;
    size_t detected = 0;
    for (uint64_t trial = 0; trial < 1000 && ok; ++trial) {
        Rng rng(hash_combine(0xDA6, trial));
        size_t n = 10 + rng.below(191); // <= 200 nodes

        graph::KnowledgeGraph g;
        // anchored container chain so certification can fully succeed
        graph::Node book;
        book.id = "bk";
        book.kind = graph::NodeKind::Book;
        book.name = "book";
        book.props = {{"subject", "physics"}, {"stage", "middle"}, {"order", 1}};
        (void)g.add_node(book);
        graph::Node chapter;
        chapter.id = "ch";
        chapter.kind = graph::NodeKind::Chapter;
        chapter.name = "chapter";
        chapter.props = {{"order", 1}};
        (void)g.add_node(chapter);
        graph::Node section;
        section.id = "sec";
        section.kind = graph::NodeKind::Section;
        section.name = "section";
        section.props = {{"order", 1}};
        (void)g.add_node(section);
        (void)g.add_edge({graph::EdgeKind::is_part_of, "ch", "bk", ""});
        (void)g.add_edge({graph::EdgeKind::is_part_of, "sec", "ch", ""});

        std::vector<std::string> ids;
        for (size_t i = 0; i < n; ++i) {
            graph::Node c;
            c.id = "n" + std::to_string(1000 + i);
            c.kind = graph::NodeKind::Concept;
            c.name = "concept " + c.id;
            c.props = {{"definition", "def"}, {"importance", "master"}};
            ids.push_back(c.id);
            (void)g.add_node(c);
            (void)g.add_edge({graph::EdgeKind::appears_in, c.id, "sec", ""});
        }
        oracles::AdjList adj;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (rng.below(1000) < 15) {
                    (void)g.add_edge({graph::EdgeKind::prerequisites_for, ids[i], ids[j], ""});
                    adj[ids[i]].insert(ids[j]);
                }
            }
        }
        // guarantee at least one forward path so an injection always exists
        (void)g.add_edge({graph::EdgeKind::prerequisites_for, ids[0], ids[1], ""});
        adj[ids[0]].insert(ids[1]);

        size_t want = 1 + rng.below(3);
        std::vector<std::pair<std::string, std::string>> back_edges;
        for (size_t attempt = 0; attempt < 400 && back_edges.size() < want; ++attempt) {
            size_t i = rng.below(n);
            auto reach = oracles::reachable(adj, ids[i]);
            if (reach.empty()) continue;
            auto it = reach.begin();
            std::advance(it, rng.below(reach.size()));
            if (*it == ids[i] || adj[*it].count(ids[i])) continue;
            (void)g.add_edge({graph::EdgeKind::prerequisites_for, *it, ids[i], ""});
            adj[*it].insert(ids[i]);
            back_edges.emplace_back(*it, ids[i]);
        }
        if (back_edges.empty()) {
            ok = false;
            detail = "no back-edge injected at trial " + std::to_string(trial);
            break;
        }

        auto cycles = validate::detect_cycles(g, graph::EdgeKind::prerequisites_for);
        if (!cycles.ok() || cycles.value().empty()) {
            ok = false;
            detail = "missed injected cycle at trial " + std::to_string(trial);
            break;
        }
        if (cycles.value().cycles.size() < cycles.value().scc_count) {
            ok = false;
            detail = "SCC without witness at trial " + std::to_string(trial);
            break;
        }
        ++detected;

        std::vector<validate::Resolution> resolutions;
        for (const auto& [src, dst] : back_edges) {
            validate::Resolution r;
            r.action = validate::Resolution::Action::remove;
            r.kind = graph::EdgeKind::prerequisites_for;
            r.source = src;
            r.target = dst;
            resolutions.push_back(r);
        }
        auto applied = validate::apply_resolutions(std::move(g), resolutions);
        if (!applied.ok()) {
            ok = false;
            detail = applied.error().to_string();
            break;
        }
        for (const auto& residual : applied.value().residual) {
            if (!residual.empty()) {
                ok = false;
                detail = "residual cycle after scripted removal";
            }
        }
        auto outcome = validate::certify(std::move(applied.value().graph));
        if (!outcome.certified) {
            ok = false;
            detail = "certification failed after resolution";
            break;
        }
    }
    report(7, "1000-DAG back-edge fuzz: 100% detection, 100% certify after removal", ok,
           detail.empty() ? std::to_string(detected) + " graphs with injections" : detail);
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    for (uint64_t trial = 0; trial < 500 && ok; ++trial) {
        Rng rng(hash_combine(0x5EED, trial));
        ingest::BookInfo book;
        book.id = "physics/b01";
        book.title = "physics book";
        book.subject = "physics";
        book.stage = "middle";
        book.order = 1;

        std::vector<graph::KnowledgeGraph> fragments;
        size_t n_frag = 2 + rng.below(5);
        std::vector<std::string> markers;
        for (size_t f = 0; f < n_frag; ++f) {
            ingest::SectionManifestEntry entry;
            entry.book_id = book.id;
            entry.chapter_order = 1 + static_cast<int64_t>(rng.below(3));
            entry.section_order = static_cast<int64_t>(f + 1);
            entry.chapter_title = "chapter " + std::to_string(entry.chapter_order);
            entry.section_title = "section " + std::to_string(entry.section_order);
            entry.file = "unused";

            ingest::SectionExtraction ex;
            size_t n_concepts = 2 + rng.below(5);
            for (size_t c = 0; c < n_concepts; ++c) {
                ingest::LocalNode node;
                node.local_id = "n" + std::to_string(c);
                node.kind = graph::NodeKind::Concept;
                node.name = "concept " + std::to_string(rng.below(8));
                node.props = {{"definition", "def of " + node.name},
                              {"importance", "master"}};
                ex.nodes.push_back(std::move(node));
            }
            for (size_t e = 0; e < 3; ++e) {
                size_t a = rng.below(n_concepts), b = rng.below(n_concepts);
                if (a == b) continue;
                if (ex.nodes[a].name == ex.nodes[b].name) continue;
                std::string marker =
                    "m" + std::to_string(trial) + "_" + std::to_string(f) + "_" +
                    std::to_string(e);
                ex.edges.push_back({graph::EdgeKind::relates_to, "n" + std::to_string(a),
                                    "n" + std::to_string(b), marker});
                markers.push_back(marker);
            }
            auto fragment = ingest::build_section_graph(book, entry, ex);
            if (!fragment.ok()) {
                ok = false;
                detail = fragment.error().to_string();
                break;
            }
            fragments.push_back(std::move(fragment).value());
        }
        if (!ok) break;

        auto once = merge::merge_book(fragments);
        if (!once.ok()) {
            ok = false;
            detail = once.error().to_string();
            break;
        }
        std::string bytes = graph::serialize(once.value().graph);

        auto again = merge::merge_book({once.value().graph});
        if (!again.ok() || graph::serialize(again.value().graph) != bytes) {
            ok = false;
            detail = "re-merge is not a fixed point at trial " + std::to_string(trial);
            break;
        }
        for (const auto& e : once.value().graph.edges()) {
            if (!once.value().graph.has_node(e.source) ||
                !once.value().graph.has_node(e.target)) {
                ok = false;
                detail = "dangling edge";
            }
        }
        if (once.value().report.nodes_out > once.value().report.nodes_in) {
            ok = false;
            detail = "node count increased";
        }
        std::vector<graph::KnowledgeGraph> shuffled = fragments;
        rng.shuffle(shuffled);
        auto permuted = merge::merge_book(shuffled);
        if (!permuted.ok() || graph::serialize(permuted.value().graph) != bytes) {
            ok = false;
            detail = "fragment order changed the output at trial " + std::to_string(trial);
            break;
        }
        for (const auto& marker : markers) {
            size_t hits = 0;
            for (const auto& e : once.value().graph.edges()) {
                if (e.evidence.find(marker) != std::string::npos) ++hits;
            }
            if (hits != 1) {
                ok = false;
                detail = "edge provenance marker " + marker + " appears " +
                         std::to_string(hits) + " times";
                break;
            }
        }
    }
    report(8, "500 randomized merges: idempotent, no dangling edges, order-invariant", ok,
           detail);
}

void criterion_9() {
    bool ok = true;
    size_t checked = 0;
    for (uint64_t trial = 0; trial < 200 && ok; ++trial) {
        Rng rng(hash_combine(0x7ED0, trial));
        size_t n = 5 + rng.below(46); // <= 50 nodes
        graph::KnowledgeGraph g;
        std::vector<std::string> ids;
        for (size_t i = 0; i < n; ++i) {
            graph::Node c;
            c.id = "n" + std::to_string(100 + i);
            c.kind = graph::NodeKind::Concept;
            c.name = "c" + c.id;
            c.props = {{"definition", "d"}, {"importance", "master"}};
            ids.push_back(c.id);
            (void)g.add_node(c);
        }
        oracles::AdjList adj;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (rng.below(100) < 14) {
                    (void)g.add_edge({graph::EdgeKind::prerequisites_for, ids[i], ids[j], ""});
                    adj[ids[i]].insert(ids[j]);
                }
            }
        }
        g.freeze(graph::FreezeMode::partial);
        for (const auto& id : ids) {
            auto direct = g.direct_successors(id);
            if (!direct.ok()) {
                ok = false;
                break;
            }
            std::set<std::string> got(direct.value().begin(), direct.value().end());
            if (got != oracles::reduction_successors(adj, id)) {
                ok = false;
                break;
            }
            ++checked;
        }
    }
    report(9, "direct_successors equals the pairwise-reachability reduction on 200 DAGs", ok,
           std::to_string(checked) + " nodes checked");
}

void criterion_10() {
    bool ok = true;
    std::string detail;
    audit::AgreementTable split{{{3, 0}, {0, 3}}};
    auto k1 = audit::fleiss_kappa(split);
    if (!k1.ok() || k1.value() != 1.0) {
        ok = false;
        detail = "split fixture";
    }
    audit::AgreementTable noisy{{{2, 1}, {1, 2}}};
    auto k2 = audit::fleiss_kappa(noisy);
    if (!k2.ok() || std::abs(k2.value() - (-1.0 / 3.0)) > 1e-15) {
        ok = false;
        detail = "noisy fixture";
    }
    for (uint64_t trial = 0; trial < 100 && ok; ++trial) {
        Rng rng(hash_combine(0xFEE5, trial));
        int r = 2 + static_cast<int>(rng.below(4));
        size_t items = 2 + rng.below(19);
        size_t cats = 2 + rng.below(3);
        audit::AgreementTable table;
        for (size_t i = 0; i < items; ++i) {
            std::vector<int> row(cats, 0);
            for (int a = 0; a < r; ++a) row[rng.below(cats)]++;
            table.rows.push_back(std::move(row));
        }
        auto kappa = audit::fleiss_kappa(table);
        if (!kappa.ok() ||
            std::abs(kappa.value() - oracles::fleiss_kappa_pairwise(table.rows)) > 1e-12) {
            ok = false;
            detail = "random table " + std::to_string(trial);
        }
    }
    report(10, "Fleiss' kappa: exact fixtures and 100 oracle-matched random tables", ok, detail);
}

void criterion_11() {
    std::ifstream in(std::string(KGFORGE_TEST_DATA_DIR) + "/parser_cases.json");
    bool ok = in.good();
    size_t cases = 0;
    std::string detail;
    if (ok) {
        nlohmann::json doc = nlohmann::json::parse(in);
        ok = doc.size() == 30;
        for (const auto& c : doc) {
            ++cases;
            auto parsed = eval::parse_answer(c["raw"].get<std::string>());
            if (c["expect"].is_null()) {
                if (parsed.ok()) {
                    ok = false;
                    detail = "should have failed: '" + c["raw"].get<std::string>() + "'";
                }
            } else {
                if (!parsed.ok() ||
                    parsed.value().to_string() != c["expect"].get<std::string>()) {
                    ok = false;
                    detail = "wrong parse: '" + c["raw"].get<std::string>() + "'";
                } else {
                    auto again = eval::parse_answer(parsed.value().to_string());
                    if (!again.ok() || !(again.value() == parsed.value())) {
                        ok = false;
                        detail = "not idempotent: '" + c["raw"].get<std::string>() + "'";
                    }
                }
            }
        }
    }
    report(11, "30-case answer-parser fixture with idempotent successes", ok,
           detail.empty() ? std::to_string(cases) + " cases" : detail);
}

void criterion_12(const SharedRun& run) {
    if (!run.ok) {
        report(12, "pipeline performance", false, run.error);
        return;
    }
    report(12, "full pipeline on the synthetic corpus under 60 s", run.pipeline_seconds < 60.0,
           std::to_string(run.pipeline_seconds) + " s single-threaded");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    SharedRun run = run_shared_pipeline();
    criterion_4(run);
    criterion_5(run);
    criterion_6(run);
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12(run);
    if (run.ok) fs::remove_all(run.root);
    printf("%d criteria failed\n", g_failures);
    return g_failures;
}
