#include "kgforge/bench/generator.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "kgforge/core/text.hpp"
#include "kgforge/merge/merge.hpp"

namespace kgforge::bench {

using graph::Direction;
using graph::EdgeKind;
using graph::KnowledgeGraph;
using graph::NodeKind;
using graph::Scope;

size_t CandidatePool::size() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.candidates.size();
    return n;
}

std::vector<Candidate> CandidatePool::flattened() const {
    std::vector<Candidate> out;
    for (const auto& l : layers) {
        out.insert(out.end(), l.candidates.begin(), l.candidates.end());
    }
    return out;
}

nlohmann::json GenerationReport::to_json() const {
    nlohmann::json doc;
    doc["emitted"] = emitted;
    doc["similarity_degraded"] = similarity_degraded;
    doc["drops"] = drops;
    nlohmann::json subtasks = nlohmann::json::object();
    for (const auto& [name, stats] : per_subtask) {
        nlohmann::json k_hist = nlohmann::json::object();
        for (const auto& [k, n] : stats.k_histogram) k_hist[std::to_string(k)] = n;
        nlohmann::json feas = nlohmann::json::object();
        for (const auto& [mask, by_k] : stats.feasibility) {
            nlohmann::json inner = nlohmann::json::object();
            for (const auto& [k, n] : by_k) inner[std::to_string(k)] = n;
            feas[mask] = std::move(inner);
        }
        subtasks[name] = {{"emitted", stats.emitted},
                          {"k_histogram", k_hist},
                          {"combo_histogram", stats.combo_histogram},
                          {"feasibility", feas}};
    }
    doc["per_subtask"] = std::move(subtasks);
    return doc;
}

Generator::Generator(const KnowledgeGraph& g, SimilarityProvider& similarity,
                     model::ModelClient& judge, GenConfig config)
    : g_(g), similarity_(similarity), judge_(judge), config_(std::move(config)),
      builtin_similarity_(similarity.id() == "ngram") {}

const GramVector& Generator::gram_of(const std::string& text) {
    auto it = gram_cache_.find(text);
    if (it == gram_cache_.end()) {
        it = gram_cache_.emplace(text, make_gram_vector(text)).first;
    }
    return it->second;
}

const std::string& Generator::norm_of(const std::string& text) {
    auto it = norm_cache_.find(text);
    if (it == norm_cache_.end()) {
        it = norm_cache_.emplace(text, merge::normalize_name(text)).first;
    }
    return it->second;
}

double Generator::similarity(const std::string& a, const std::string& b) {
    if (builtin_similarity_) return gram_cosine(gram_of(a), gram_of(b));
    auto r = similarity_.score(a, b);
    if (r.ok()) return r.value();
    report_.similarity_degraded = true;
    return gram_cosine(gram_of(a), gram_of(b));
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

nlohmann::json edge_json(EdgeKind kind, const std::string& src, const std::string& dst,
                         bool direct = true) {
    nlohmann::json j = {{"kind", graph::edge_kind_name(kind)}, {"source", src}, {"target", dst}};
    if (!direct) j["direct"] = false;
    return j;
}

} // namespace

std::vector<std::string> Generator::query_nodes(const TaskSpec& spec) const {
    std::vector<std::string> out;
    for (NodeKind kind : spec.query_kinds) {
        for (auto& id : g_.node_ids_of_kind(kind)) out.push_back(std::move(id));
    }
    return sorted_unique(std::move(out));
}

Result<std::vector<GoldMember>> Generator::derive_gold(const TaskSpec& spec,
                                                       const std::string& query) {
    const graph::Node* qn = g_.find_node(query);
    if (!qn) return Error{Errc::unknown_node, "query node '" + query + "'"};

    std::vector<GoldMember> gold;
    auto add = [&](const std::string& id, nlohmann::json edge) {
        for (const auto& m : gold) {
            if (m.node_id == id) return;
        }
        gold.push_back({id, display_text(g_, id), std::move(edge)});
    };

    if (spec.subtask == "ground_1") {
        for (EdgeKind k : {EdgeKind::tests_concept, EdgeKind::tests_skill}) {
            auto r = g_.neighbors(query, k, Direction::out);
            if (!r.ok()) return r.error();
            for (const auto& id : r.value()) add(id, edge_json(k, query, id));
        }
    } else if (spec.subtask == "ground_2") {
        for (EdgeKind k : {EdgeKind::tests_concept, EdgeKind::tests_skill}) {
            auto r = g_.neighbors(query, k, Direction::in);
            if (!r.ok()) return r.error();
            for (const auto& id : r.value()) add(id, edge_json(k, id, query));
        }
    } else if (spec.subtask == "prereq_1") {
        auto r = g_.prerequisite_closure(query);
        if (!r.ok()) return r.error();
        for (const auto& id : r.value()) {
            add(id, edge_json(EdgeKind::prerequisites_for, id, query, false));
        }
    } else if (spec.subtask == "prereq_2") {
        auto r = g_.direct_successors(query);
        if (!r.ok()) return r.error();
        for (const auto& id : r.value()) {
            add(id, edge_json(EdgeKind::prerequisites_for, query, id));
        }
    } else if (spec.subtask == "neighbor") {
        for (EdgeKind k : {EdgeKind::is_a, EdgeKind::relates_to}) {
            auto r = g_.neighbors(query, k, Direction::both);
            if (!r.ok()) return r.error();
            for (const auto& id : r.value()) add(id, edge_json(k, query, id));
        }
    } else if (spec.subtask == "evidence_1") {
        auto r = g_.neighbors(query, EdgeKind::verifies, Direction::in);
        if (!r.ok()) return r.error();
        for (const auto& id : r.value()) add(id, edge_json(EdgeKind::verifies, id, query));
    } else if (spec.subtask == "evidence_2") {
        auto r = g_.neighbors(query, EdgeKind::verifies, Direction::out);
        if (!r.ok()) return r.error();
        for (const auto& id : r.value()) add(id, edge_json(EdgeKind::verifies, query, id));
    } else if (spec.subtask == "locate_1") {
        auto fa = g_.first_appearance(query);
        if (!fa.ok()) return fa.error();
        if (!fa.value().chapter_id.empty()) {
            add(fa.value().chapter_id,
                edge_json(EdgeKind::appears_in, query, fa.value().section_id));
        }
    } else if (spec.subtask == "locate_2") {
        auto r = g_.neighbors(query, EdgeKind::leads_to, Direction::in);
        if (!r.ok()) return r.error();
        for (const auto& id : r.value()) add(id, edge_json(EdgeKind::leads_to, id, query));
    } else {
        return Error{Errc::unsupported_kind, "unknown subtask '" + spec.subtask + "'"};
    }

    std::erase_if(gold, [](const GoldMember& m) { return m.text.empty(); });
    if (gold.empty()) return Error{Errc::empty_gold, "no gold members for " + query};
    return gold;
}

Result<CandidatePool> Generator::build_candidate_pool(const TaskSpec& spec,
                                                      const std::string& query,
                                                      const std::vector<GoldMember>& gold,
                                                      Rng& rng) {
    std::set<std::string> excluded{query};
    for (const auto& m : gold) excluded.insert(m.node_id);

    CandidatePool pool;
    auto pool_full = [&] { return pool.size() >= config_.min_raw_pool; };

    // adds one layer from `ids`, filtered by kind, capped to remaining capacity
    auto add_layer = [&](const std::string& tag, std::vector<std::string> ids,
                         const std::set<NodeKind>& kinds) {
        if (pool_full()) return;
        ids = sorted_unique(std::move(ids));
        std::vector<Candidate> members;
        for (const auto& id : ids) {
            if (excluded.count(id)) continue;
            const graph::Node* n = g_.find_node(id);
            if (!n || !kinds.count(n->kind)) continue;
            std::string txt = display_text(g_, id);
            if (txt.empty()) continue;
            members.push_back({id, std::move(txt), 0.0});
        }
        size_t capacity = config_.max_raw_pool - std::min(config_.max_raw_pool, pool.size());
        if (members.size() > capacity) {
            // over-full layer: uniform subsample under the item seed
            rng.shuffle(members);
            members.resize(capacity);
            std::sort(members.begin(), members.end(),
                      [](const Candidate& a, const Candidate& b) { return a.node_id < b.node_id; });
        }
        if (members.empty()) return;
        for (const auto& c : members) excluded.insert(c.node_id);
        pool.layers.push_back({tag, std::move(members)});
    };

    auto ring = [&](const std::string& id, int k) -> std::vector<std::string> {
        auto r = g_.k_hop_ring(id, k);
        return r.ok() ? r.value() : std::vector<std::string>{};
    };
    auto neighborhood2 = [&](const std::string& id) {
        auto out = ring(id, 1);
        auto r2 = ring(id, 2);
        out.insert(out.end(), r2.begin(), r2.end());
        return out;
    };
    auto scope_of = [&](Scope s, const std::set<NodeKind>& kinds) -> std::vector<std::string> {
        auto r = g_.scope_pool(query, s, kinds);
        return r.ok() ? r.value() : std::vector<std::string>{};
    };
    auto siblings_all = [&]() {
        std::vector<std::string> out;
        for (auto via : {graph::SiblingVia::is_a_parent, graph::SiblingVia::shared_prereq_target}) {
            auto r = g_.siblings(query, via);
            if (r.ok()) out.insert(out.end(), r.value().begin(), r.value().end());
        }
        return out;
    };
    auto forward_reach_depths = [&]() {
        // prerequisites_for BFS depths from the query
        std::map<std::string, int> depth;
        std::vector<std::string> frontier{query};
        depth[query] = 0;
        int d = 0;
        while (!frontier.empty()) {
            std::vector<std::string> next;
            for (const auto& id : frontier) {
                auto r = g_.neighbors(id, EdgeKind::prerequisites_for, Direction::out);
                if (!r.ok()) continue;
                for (const auto& succ : r.value()) {
                    if (!depth.count(succ)) {
                        depth[succ] = d + 1;
                        next.push_back(succ);
                    }
                }
            }
            frontier = std::move(next);
            ++d;
        }
        depth.erase(query);
        return depth;
    };

    const std::set<NodeKind> cs{NodeKind::Concept, NodeKind::Skill};
    const std::set<NodeKind> cse{NodeKind::Concept, NodeKind::Skill, NodeKind::Experiment};
    const std::set<NodeKind> concepts_only{NodeKind::Concept};
    const std::set<NodeKind> experiments_only{NodeKind::Experiment};
    const std::set<NodeKind> exercises_only{NodeKind::Exercise};
    const std::set<NodeKind> chapters_only{NodeKind::Chapter};

    auto scope_ladder = [&](const std::set<NodeKind>& kinds) {
        add_layer("same_section", scope_of(Scope::section, kinds), kinds);
        add_layer("same_chapter", scope_of(Scope::chapter, kinds), kinds);
        add_layer("same_book", scope_of(Scope::book, kinds), kinds);
        add_layer("same_stage", scope_of(Scope::subject_stage, kinds), kinds);
        add_layer("same_subject", scope_of(Scope::subject, kinds), kinds);
    };

    if (spec.subtask == "ground_1") {
        std::vector<std::string> seed;
        for (const auto& m : gold) {
            auto n2 = neighborhood2(m.node_id);
            seed.insert(seed.end(), n2.begin(), n2.end());
        }
        add_layer("answer_2hop", std::move(seed), cs);
        scope_ladder(cs);
    } else if (spec.subtask == "ground_2") {
        // exercises attached to the 2-hop structural neighborhood of the query
        std::vector<std::string> near;
        auto n2 = neighborhood2(query);
        n2.push_back(query);
        for (const auto& id : n2) {
            for (EdgeKind k : {EdgeKind::tests_concept, EdgeKind::tests_skill}) {
                auto r = g_.neighbors(id, k, Direction::in);
                if (r.ok()) near.insert(near.end(), r.value().begin(), r.value().end());
            }
        }
        add_layer("near_exercises", std::move(near), exercises_only);
        scope_ladder(exercises_only);
    } else if (spec.subtask == "prereq_1") {
        auto depths = forward_reach_depths();
        std::vector<std::string> descendants;
        for (const auto& [id, d] : depths) descendants.push_back(id);
        add_layer("descendants", std::move(descendants), cs);

        std::vector<std::string> boundary;
        std::set<std::string> closure;
        for (const auto& m : gold) closure.insert(m.node_id);
        for (const auto& m : gold) {
            for (const auto& nb : g_.structural_neighbors(m.node_id)) {
                if (!closure.count(nb)) boundary.push_back(nb);
            }
        }
        add_layer("closure_boundary", std::move(boundary), cs);
        add_layer("siblings", siblings_all(), cs);
        scope_ladder(cs);
    } else if (spec.subtask == "prereq_2") {
        auto closure = g_.prerequisite_closure(query);
        add_layer("closure", closure.ok() ? closure.value() : std::vector<std::string>{}, cse);

        auto depths = forward_reach_depths();
        std::vector<std::string> deep;
        for (const auto& [id, d] : depths) {
            if (d >= 2) deep.push_back(id);
        }
        add_layer("deep_descendants", std::move(deep), cse);
        add_layer("siblings", siblings_all(), cs);
        scope_ladder(cs);
    } else if (spec.subtask == "neighbor") {
        add_layer("ring2", ring(query, 2), concepts_only);
        add_layer("siblings", siblings_all(), concepts_only);
        scope_ladder(concepts_only);
    } else if (spec.subtask == "evidence_1" || spec.subtask == "evidence_2") {
        const auto& kinds = spec.subtask == "evidence_1" ? experiments_only : concepts_only;
        std::vector<std::string> near = neighborhood2(query);
        for (const auto& m : gold) {
            auto n2 = neighborhood2(m.node_id);
            near.insert(near.end(), n2.begin(), n2.end());
        }
        add_layer("near_2hop", std::move(near), kinds);
        scope_ladder(kinds);
    } else if (spec.subtask == "locate_1") {
        std::vector<std::string> alt;
        for (const auto& section : g_.anchor_sections(query)) {
            if (auto ch = g_.section_chapter(section)) alt.push_back(*ch);
        }
        add_layer("alt_locations", std::move(alt), chapters_only);
        add_layer("same_book", scope_of(Scope::book, chapters_only), chapters_only);
        add_layer("same_stage", scope_of(Scope::subject_stage, chapters_only), chapters_only);
        add_layer("same_subject", scope_of(Scope::subject, chapters_only), chapters_only);
    } else if (spec.subtask == "locate_2") {
        // nearby earlier chapters relative to the query and the gold chapters
        std::vector<std::string> nearby;
        auto earlier_in_book = [&](const std::string& chapter_id) {
            const graph::Node* ch = g_.find_node(chapter_id);
            auto book = g_.chapter_book(chapter_id);
            if (!ch || !book) return;
            int64_t order = ch->props.value("order", int64_t{0});
            auto r = g_.scope_pool(chapter_id, Scope::book, chapters_only);
            if (!r.ok()) return;
            for (const auto& other : r.value()) {
                const graph::Node* oc = g_.find_node(other);
                if (oc && oc->props.value("order", int64_t{0}) < order) nearby.push_back(other);
            }
        };
        earlier_in_book(query);
        for (const auto& m : gold) earlier_in_book(m.node_id);
        add_layer("nearby_earlier", std::move(nearby), chapters_only);
        add_layer("same_book", scope_of(Scope::book, chapters_only), chapters_only);
        add_layer("same_stage", scope_of(Scope::subject_stage, chapters_only), chapters_only);
        add_layer("same_subject", scope_of(Scope::subject, chapters_only), chapters_only);
    }

    if (pool.size() < config_.pool_floor) {
        return Error{Errc::insufficient_pool,
                     "pool for " + query + " has " + std::to_string(pool.size()) +
                         " candidates after all layers"};
    }
    return pool;
}

void Generator::rank_candidates(CandidatePool& pool, const std::string& question,
                                const std::vector<GoldMember>& gold) {
    for (auto& layer : pool.layers) {
        for (auto& c : layer.candidates) {
            double to_question = similarity(c.text, question);
            double best_gold = 0.0;
            for (const auto& m : gold) {
                best_gold = std::max(best_gold, similarity(c.text, m.text));
            }
            c.score = (to_question + best_gold) / 2.0;
        }
        std::stable_sort(layer.candidates.begin(), layer.candidates.end(),
                         [](const Candidate& a, const Candidate& b) {
                             if (a.score != b.score) return a.score > b.score;
                             return a.node_id < b.node_id;
                         });
    }
}

void Generator::rule_filter(CandidatePool& pool, const TaskSpec& spec, const std::string& query,
                            const std::vector<GoldMember>& gold) {
    std::set<std::string> gold_ids;
    std::set<std::string> gold_norms;
    for (const auto& m : gold) {
        gold_ids.insert(m.node_id);
        gold_norms.insert(norm_of(m.text));
    }

    // task-semantic near-gold
    std::set<std::string> near_gold_ids;
    if (spec.subtask == "neighbor") {
        for (const auto& nb : g_.structural_neighbors(query)) near_gold_ids.insert(nb);
    } else if (spec.subtask == "prereq_2") {
        // one-hop successors dropped by the reduction are reachable via a
        // longer path and read as correct under a looser interpretation
        auto r = g_.neighbors(query, EdgeKind::prerequisites_for, Direction::out);
        if (r.ok()) {
            for (const auto& id : r.value()) {
                if (!gold_ids.count(id)) near_gold_ids.insert(id);
            }
        }
    } else if (spec.subtask == "locate_1") {
        for (const auto& section : g_.anchor_sections(query)) {
            if (auto ch = g_.section_chapter(section)) near_gold_ids.insert(*ch);
        }
    }

    std::set<std::string> seen_norms = gold_norms;
    for (auto& layer : pool.layers) {
        std::erase_if(layer.candidates, [&](const Candidate& c) {
            if (gold_ids.count(c.node_id)) return true;
            if (near_gold_ids.count(c.node_id)) return true;
            if (!seen_norms.insert(norm_of(c.text)).second) return true; // dup of gold/earlier
            return false;
        });
    }
}

void Generator::surface_dedup_filter(CandidatePool& pool, const std::vector<GoldMember>& gold) {
    // always the 3-gram cosine, independent of the ranking provider
    std::vector<std::string> retained_texts;
    for (auto& layer : pool.layers) {
        std::erase_if(layer.candidates, [&](const Candidate& c) {
            const GramVector& cv = gram_of(c.text);
            for (const auto& m : gold) {
                if (gram_cosine(cv, gram_of(m.text)) >= config_.surface_threshold) return true;
            }
            for (const auto& t : retained_texts) {
                if (gram_cosine(cv, gram_of(t)) >= config_.surface_threshold) return true;
            }
            retained_texts.push_back(c.text);
            return false;
        });
    }
}

model::ChatRequest Generator::render_judge_prompt(const std::string& question,
                                                  const std::string& gold_answers,
                                                  const std::string& candidate) {
    static const char* kSystem =
        "You are an experienced K-12 teacher.\n"
        "Your task is to judge whether a candidate option is a valid distractor for a "
        "multiple-choice question.\n"
        "\n"
        "Criteria.\n"
        "A valid distractor must satisfy all of the following:\n"
        "- It is incorrect given the question and the gold answers.\n"
        "- It is plausible and relevant (not obviously unrelated).\n"
        "- It is not partially correct, not ambiguous, and would not be accepted as correct by a "
        "careful teacher.\n"
        "\n"
        "Instruction.\n"
        "- Be conservative: if a candidate could be considered correct under any reasonable "
        "interpretation, mark it as invalid.\n"
        "\n"
        "Output format.\n"
        "- Output exactly one label: VALID or INVALID.\n";

    model::ChatRequest req;
    req.messages = {{"system", kSystem},
                    {"user", "Question: " + question + "\nGold answers: " + gold_answers +
                                 "\nCandidate option: " + candidate +
                                 "\n\nIs this a valid distractor?"}};
    req.params.max_tokens = 8;
    return req;
}

namespace {

// strict verdict parse: VALID / INVALID after trimming, nothing else
std::optional<bool> parse_verdict(const std::string& raw) {
    std::string t = text::trim(raw);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (t == "VALID") return true;
    if (t == "INVALID") return false;
    return std::nullopt;
}

} // namespace

void Generator::pedagogical_filter(CandidatePool& pool, const std::string& question,
                                   const std::vector<GoldMember>& gold) {
    std::string gold_answers;
    for (const auto& m : gold) {
        if (!gold_answers.empty()) gold_answers += "; ";
        gold_answers += m.text;
    }
    for (auto& layer : pool.layers) {
        std::erase_if(layer.candidates, [&](const Candidate& c) {
            auto req = render_judge_prompt(question, gold_answers, c.text);
            for (int attempt = 0; attempt <= config_.judge_retries; ++attempt) {
                auto reply = judge_.send(req);
                if (!reply.ok()) continue; // transport failure, retry
                auto verdict = parse_verdict(reply.value());
                if (verdict) return !*verdict; // keep only VALID
            }
            report_.drops["judge_failed_candidates"]++; // conservative: treated INVALID
            return true;
        });
    }
}

Result<int> Generator::select_cardinality(const std::string& subtask, size_t gold_size,
                                          size_t pool_size) {
    std::vector<int> feasible;
    const int k_max = static_cast<int>(std::min<size_t>(gold_size, 3));
    for (int k = 1; k <= k_max; ++k) {
        if (pool_size + static_cast<size_t>(k) >= 4) feasible.push_back(k);
    }
    if (feasible.empty()) {
        return Error{Errc::no_feasible_k, "no feasible cardinality"};
    }
    auto& used = k_used_[subtask];
    int best = feasible.front();
    for (int k : feasible) {
        if (used[k] < used[best]) best = k; // ties keep the smaller k
    }
    used[best]++;
    return best;
}

std::vector<std::string> Generator::assign_labels(const std::string& subtask, int k) {
    static const std::vector<std::vector<std::string>> combos_by_k = [] {
        std::vector<std::vector<std::string>> out(4);
        const std::string labels = "ABCD";
        for (unsigned mask = 1; mask < 16; ++mask) {
            std::string combo;
            for (int b = 0; b < 4; ++b) {
                if (mask & (1u << b)) combo += labels[b];
            }
            out[combo.size() - 1].push_back(combo);
        }
        for (auto& v : out) std::sort(v.begin(), v.end());
        return out;
    }();

    const auto& combos = combos_by_k[k - 1];
    auto& used = combo_used_[subtask + "|" + std::to_string(k)];
    std::string best = combos.front();
    for (const auto& combo : combos) {
        if (used[combo] < used[best]) best = combo; // ties fall to lexicographic order
    }
    used[best]++;
    std::vector<std::string> out;
    for (char c : best) out.emplace_back(1, c);
    return out;
}

Result<BenchItem> Generator::assemble_item(const TaskSpec& spec, const std::string& query) {
    Rng rng = keyed_rng(config_.seed, spec.subtask + "/" + query);

    auto gold = derive_gold(spec, query);
    if (!gold.ok()) return gold.error();

    const std::string question = render_question(spec, g_, query);

    auto pool = build_candidate_pool(spec, query, gold.value(), rng);
    if (!pool.ok()) return pool.error();

    rank_candidates(pool.value(), question, gold.value());
    rule_filter(pool.value(), spec, query, gold.value());
    surface_dedup_filter(pool.value(), gold.value());
    pedagogical_filter(pool.value(), question, gold.value());

    auto distractors = pool.value().flattened();
    std::string feasible_key; // e.g. "12" when k in {1,2} was feasible
    for (int k = 1; k <= static_cast<int>(std::min<size_t>(gold.value().size(), 3)); ++k) {
        if (distractors.size() + static_cast<size_t>(k) >= 4) {
            feasible_key += static_cast<char>('0' + k);
        }
    }
    auto k = select_cardinality(spec.subtask, gold.value().size(), distractors.size());
    if (!k.ok()) return k.error();

    // retained gold subset, uniform under the item seed when |gold| > k
    std::vector<GoldMember> retained = gold.value();
    if (retained.size() > static_cast<size_t>(k.value())) {
        rng.shuffle(retained);
        retained.resize(static_cast<size_t>(k.value()));
        std::sort(retained.begin(), retained.end(),
                  [](const GoldMember& a, const GoldMember& b) { return a.node_id < b.node_id; });
    }

    std::vector<std::string> gold_labels = assign_labels(spec.subtask, k.value());
    // gold-to-label placement randomized under the item seed
    std::vector<GoldMember> placed = retained;
    rng.shuffle(placed);

    BenchItem item;
    item.item_id = spec.subtask + ":" + query;
    item.family = family_name(spec.family);
    item.subtask = spec.subtask;
    item.subject = g_.node_subject(query).value_or("");
    item.stage = g_.node_stage(query).value_or("");
    item.question = question;
    item.query_node = query;
    item.k = k.value();
    item.gold_labels = gold_labels;
    for (const auto& m : gold.value()) item.gold_edges.push_back(m.edge);

    size_t gold_idx = 0, distractor_idx = 0;
    std::set<std::string> gold_label_set(gold_labels.begin(), gold_labels.end());
    for (char c = 'A'; c <= 'D'; ++c) {
        std::string label(1, c);
        BenchOption opt;
        opt.label = label;
        if (gold_label_set.count(label)) {
            opt.text = placed[gold_idx].text;
            opt.node_id = placed[gold_idx].node_id;
            opt.is_gold = true;
            ++gold_idx;
        } else {
            if (distractor_idx >= distractors.size()) {
                return Error{Errc::no_feasible_k, "ran out of distractors"};
            }
            opt.text = distractors[distractor_idx].text;
            opt.node_id = distractors[distractor_idx].node_id;
            opt.is_gold = false;
            ++distractor_idx;
        }
        item.options.push_back(std::move(opt));
    }

    // option texts must be pairwise distinct
    for (size_t i = 0; i < item.options.size(); ++i) {
        for (size_t j = i + 1; j < item.options.size(); ++j) {
            if (item.options[i].text == item.options[j].text) {
                return Error{Errc::schema_violation, "duplicate option text"};
            }
        }
    }

    auto& stats = report_.per_subtask[spec.subtask];
    stats.emitted++;
    stats.k_histogram[item.k]++;
    std::string combo;
    for (const auto& l : item.gold_labels) combo += l;
    stats.combo_histogram[combo]++;
    stats.feasibility[feasible_key][item.k]++;
    report_.emitted++;
    return item;
}

Result<GenerationResult> Generator::generate() {
    if (!g_.certified()) {
        return Error{Errc::not_validated, "benchmark generation requires a certified graph"};
    }
    report_ = GenerationReport{};
    k_used_.clear();
    combo_used_.clear();

    std::set<std::string> wanted(config_.subtasks.begin(), config_.subtasks.end());

    GenerationResult result;
    for (const TaskSpec& spec : task_specs()) {
        if (!wanted.empty() && !wanted.count(spec.subtask)) continue;
        report_.per_subtask[spec.subtask]; // subtasks appear even when empty
        for (const std::string& query : query_nodes(spec)) {
            auto item = assemble_item(spec, query);
            if (!item.ok()) {
                switch (item.code()) {
                    case Errc::empty_gold: report_.drops["empty_gold"]++; break;
                    case Errc::insufficient_pool: report_.drops["insufficient_pool"]++; break;
                    case Errc::no_feasible_k: report_.drops["no_feasible_k"]++; break;
                    case Errc::unanchored_node: report_.drops["unanchored"]++; break;
                    case Errc::schema_violation: report_.drops["duplicate_option_text"]++; break;
                    default: report_.drops["other"]++; break;
                }
                continue;
            }
            result.items.push_back(std::move(item).value());
        }
    }
    result.report = report_;
    return result;
}

} // namespace kgforge::bench
