#include "kgforge/synth/qa.hpp"

#include <algorithm>
#include <cstdio>

#include "kgforge/core/hash.hpp"
#include "kgforge/core/text.hpp"

namespace kgforge::synth {

using graph::Edge;
using graph::EdgeKind;
using graph::KnowledgeGraph;
using graph::Node;
using graph::NodeKind;

const char* source_kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::node_grounded: return "node_grounded";
        case SourceKind::edge_grounded: return "edge_grounded";
        case SourceKind::exercise_assessment: return "exercise_assessment";
    }
    return "?";
}

namespace {

std::optional<SourceKind> source_kind_from(const std::string& name) {
    for (SourceKind k : {SourceKind::node_grounded, SourceKind::edge_grounded,
                         SourceKind::exercise_assessment}) {
        if (name == source_kind_name(k)) return k;
    }
    return std::nullopt;
}

std::string hex64(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

nlohmann::json QAPair::to_json() const {
    nlohmann::json doc;
    doc["question"] = question;
    doc["answer"] = answer;
    doc["source_kind"] = source_kind_name(source);
    doc["pool"] = pool;
    doc["source_ids"] = source_ids;
    doc["subject"] = subject;
    nlohmann::json meta = nlohmann::json::object();
    if (!prompt_hash.empty()) meta["prompt_hash"] = prompt_hash;
    meta["client"] = client_id;
    doc["meta"] = std::move(meta);
    return doc;
}

Result<QAPair> QAPair::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("question") || !doc.contains("answer")) {
        return Error{Errc::malformed, "QA record needs 'question' and 'answer'"};
    }
    QAPair p;
    if (!doc["question"].is_string() || !doc["answer"].is_string()) {
        return Error{Errc::malformed, "QA fields must be strings"};
    }
    p.question = doc["question"].get<std::string>();
    p.answer = doc["answer"].get<std::string>();
    auto kind = source_kind_from(doc.value("source_kind", std::string{"node_grounded"}));
    if (!kind) return Error{Errc::malformed, "unknown source kind"};
    p.source = *kind;
    p.pool = doc.value("pool", std::string{});
    if (doc.contains("source_ids")) {
        for (const auto& id : doc["source_ids"]) p.source_ids.push_back(id.get<std::string>());
    }
    p.subject = doc.value("subject", std::string{});
    if (doc.contains("meta")) {
        p.prompt_hash = doc["meta"].value("prompt_hash", std::string{});
        p.client_id = doc["meta"].value("client", std::string{});
    }
    return p;
}

nlohmann::json crop_properties(const Node& node, QaType qa_type) {
    static const std::map<NodeKind, std::vector<const char*>> node_keys = {
        {NodeKind::Concept, {"definition", "formula", "unit", "examples", "aliases"}},
        {NodeKind::Skill, {"description", "examples"}},
        {NodeKind::Experiment, {"instruments", "process", "phenomena", "conclusion"}},
        {NodeKind::Exercise, {"stem", "answer", "analysis"}},
    };
    nlohmann::json out = nlohmann::json::object();
    auto it = node_keys.find(node.kind);
    if (it == node_keys.end()) return out;
    (void)qa_type; // same whitelist for node- and edge-anchored prompts today
    for (const char* key : it->second) {
        auto p = node.props.find(key);
        if (p == node.props.end()) continue;
        if (p->is_string() && p->get<std::string>().empty()) continue;
        if (p->is_array() && p->empty()) continue;
        out[key] = *p;
    }
    return out;
}

namespace {

const char* kQaExpertIntro =
    "You are a top K-12 education expert with 20 years of experience, skilled at transforming "
    "complex STEM textbook knowledge into highly logical and thought-provoking QA materials.\n";

const char* kQaGeneralConstraints =
    "1. General Constraints\n"
    "- Each example must contain exactly one question and one answer.\n"
    "- All content must be strictly grounded in the input properties; do not introduce external "
    "knowledge.\n";

const char* kQaStyleAndOutput =
    "Style Requirements\n"
    "- Language must be clear, concise, and pedagogically appropriate.\n"
    "- Maintain a formal and precise tone, but avoid unnecessary complexity.\n"
    "- Explanations should be accessible to K-12 students.\n"
    "\n"
    "Output Format\n"
    "- Output only a JSON array of objects, each with exactly the keys \"question\" and "
    "\"answer\". No explanatory text, comments, or Markdown code block markers.\n";

const char* strategy_block(NodeKind kind) {
    switch (kind) {
        case NodeKind::Concept:
            return "2. Concept-Oriented QA\n"
                   "- Questions should focus on: definition (what it is), key properties or "
                   "formulas, basic understanding.\n"
                   "- Answers must lead with the core definition plus the core formula or key "
                   "rule when present, followed by 1-2 sentences of explanation and one "
                   "illustrative example when available.\n"
                   "- Use aliases when appropriate to improve naturalness.\n";
        case NodeKind::Skill:
            return "2. Skill-Oriented QA\n"
                   "- Questions should focus on: what the method is, how to apply it (steps or "
                   "procedure), when to use it (applicable scenarios).\n"
                   "- Answers must lead with the method description or steps, followed by a "
                   "brief explanation of usage or advantages and one illustrative example when "
                   "available.\n";
        case NodeKind::Experiment:
            return "2. Experiment-Oriented QA\n"
                   "- Questions should focus on: the instruments used, the procedure, the "
                   "observed phenomena, and the conclusion.\n"
                   "- Answers must trace the path from setup and observation to the stated "
                   "conclusion.\n";
        case NodeKind::Exercise:
            return "2. Exercise-Oriented QA\n"
                   "- The question restates the exercise stem as a direct question to the "
                   "student.\n"
                   "- The answer must give the final result together with concise step-by-step "
                   "reasoning grounded in the provided answer and analysis.\n";
        default:
            return "";
    }
}

} // namespace

Result<std::string> render_node_prompt(const KnowledgeGraph& g, const std::string& node_id,
                                       int n_pairs) {
    const Node* node = g.find_node(node_id);
    if (!node) return Error{Errc::unknown_node, "no node '" + node_id + "'"};
    if (!graph::is_content_kind(node->kind)) {
        return Error{Errc::unsupported_kind, "container nodes have no QA prompt"};
    }
    nlohmann::json props = crop_properties(*node, QaType::node);

    std::string prompt = kQaExpertIntro;
    prompt += "Your task is to synthesize " + std::to_string(n_pairs) +
              " high-quality SFT training examples based on the provided " +
              graph::node_kind_name(node->kind) + ".\n\n";
    prompt += "Input Data\n- name: " + node->name + "\n- properties: " + props.dump() + "\n\n";
    prompt += "Generation Strategy\n";
    prompt += kQaGeneralConstraints;
    prompt += strategy_block(node->kind);
    prompt += "\n";
    prompt += kQaStyleAndOutput;
    return prompt;
}

Result<std::string> render_edge_prompt(const KnowledgeGraph& g, const Edge& edge, int n_pairs) {
    if (edge.kind == EdgeKind::tests_concept || edge.kind == EdgeKind::tests_skill) {
        return Error{Errc::unsupported_edge_kind,
                     "assessment edges use the deterministic template path"};
    }
    if (edge.kind != EdgeKind::is_a && edge.kind != EdgeKind::prerequisites_for &&
        edge.kind != EdgeKind::relates_to && edge.kind != EdgeKind::verifies) {
        return Error{Errc::unsupported_edge_kind,
                     std::string(graph::edge_kind_name(edge.kind)) + " has no QA prompt"};
    }
    const Node* src = g.find_node(edge.source);
    const Node* dst = g.find_node(edge.target);
    if (!src || !dst) return Error{Errc::unknown_node, "edge endpoint missing"};

    nlohmann::json props = {{"source", crop_properties(*src, QaType::edge)},
                            {"target", crop_properties(*dst, QaType::edge)}};

    std::string prompt = kQaExpertIntro;
    prompt += "Your task is to synthesize " + std::to_string(n_pairs) +
              " high-quality SFT training examples based on the provided edge relation.\n\n";
    prompt += "Input Data\n";
    prompt += "- relation: " + std::string(graph::edge_kind_name(edge.kind)) + "\n";
    prompt += "- source: " + src->name + "\n";
    prompt += "- target: " + dst->name + "\n";
    prompt += "- properties: " + props.dump() + "\n\n";
    prompt += "Generation Strategy\n";
    prompt += kQaGeneralConstraints;
    prompt +=
        "- Questions must focus on explaining why the edge holds, rather than merely restating "
        "the two endpoint names.\n";
    prompt += "2. Relation-Specific Prompting Goals\n";
    switch (edge.kind) {
        case EdgeKind::is_a:
            prompt += "- is_a: ask why " + src->name + " belongs to or is part of " + dst->name +
                      "; answers should explain how the source satisfies the defining properties "
                      "of the target.\n"
                      "3. Preferred Answer Structure\n"
                      "- because of the source definition, the target definition, and how the "
                      "source satisfies the target definition, therefore the source belongs to "
                      "the target.\n";
            break;
        case EdgeKind::prerequisites_for:
            prompt += "- prerequisites_for: ask why one should learn " + src->name + " before " +
                      dst->name +
                      "; answers should explain what knowledge or ability the source provides "
                      "that supports later learning of the target.\n"
                      "3. Preferred Answer Structure\n"
                      "- because learning the target requires specific knowledge or ability, and "
                      "the source provides this knowledge or ability, therefore the source "
                      "should be learned first.\n";
            break;
        case EdgeKind::relates_to:
            prompt += "- relates_to: ask what relationship holds between " + src->name + " and " +
                      dst->name +
                      "; answers should clarify their connection, contrast, or shared "
                      "properties.\n"
                      "3. Preferred Answer Structure\n"
                      "- first state the concrete relationship between the two concepts, then "
                      "briefly explain each side of the relation.\n";
            break;
        case EdgeKind::verifies:
            prompt += "- verifies: ask what principle is verified by " + src->name +
                      ", or how " + src->name + " verifies " + dst->name +
                      "; answers should trace the path from experiment content and observations "
                      "to the verified concept.\n"
                      "3. Preferred Answer Structure\n"
                      "- from the experiment's setup, operation, or observed phenomenon, explain "
                      "what result is seen and why that result supports the target concept.\n";
            break;
        default:
            break;
    }
    prompt += "\n";
    prompt += kQaStyleAndOutput;
    return prompt;
}

Result<QAPair> exercise_template_qa(const KnowledgeGraph& g, const Edge& edge) {
    if (edge.kind != EdgeKind::tests_concept && edge.kind != EdgeKind::tests_skill) {
        return Error{Errc::unsupported_edge_kind, "not an assessment edge"};
    }
    const Node* exercise = g.find_node(edge.source);
    const Node* target = g.find_node(edge.target);
    if (!exercise || !target) return Error{Errc::unknown_node, "edge endpoint missing"};

    std::string stem = text::trim(exercise->props.value("stem", std::string{}));
    if (stem.empty()) {
        return Error{Errc::missing_stem, "exercise '" + edge.source + "' has no stem"};
    }

    const bool is_concept = edge.kind == EdgeKind::tests_concept;
    const char* noun = is_concept ? "concept" : "skill";

    QAPair pair;
    pair.question = std::string("Which ") + noun +
                    " does the following exercise assess? Exercise: " + stem;
    pair.answer =
        std::string("This exercise assesses the ") + noun + " \"" + target->name + "\".";
    std::string detail =
        target->props.value(is_concept ? "definition" : "description", std::string{});
    if (!detail.empty()) {
        pair.answer += " " + target->name + ": " + detail;
    }
    pair.source = SourceKind::exercise_assessment;
    pair.pool = kPoolAssessment;
    pair.source_ids = {edge.source, graph::edge_kind_name(edge.kind), edge.target};
    pair.subject = g.node_subject(edge.source).value_or("");
    pair.client_id = "template";
    return pair;
}

Status validate_qa(const QAPair& pair) {
    if (text::trim(pair.question).empty()) {
        return make_error(Errc::empty_field, "question is empty");
    }
    if (text::trim(pair.answer).empty()) {
        return make_error(Errc::empty_field, "answer is empty");
    }
    auto qs = text::dominant_script(pair.question);
    auto as = text::dominant_script(pair.answer);
    if (qs != text::Script::none && as != text::Script::none && qs != as) {
        return make_error(Errc::language_mismatch,
                          std::string("question is ") + text::script_name(qs) + ", answer is " +
                              text::script_name(as));
    }
    return Status::success();
}

std::vector<QAPair> balanced_subsample(const std::map<std::string, std::vector<QAPair>>& pools,
                                       const std::map<std::string, size_t>& targets,
                                       uint64_t seed) {
    std::vector<QAPair> out;
    for (const auto& [pool_key, members] : pools) {
        size_t take = members.size();
        if (auto it = targets.find(pool_key); it != targets.end()) {
            take = std::min(take, it->second);
        }
        if (take == 0) continue;

        std::vector<QAPair> sorted = members;
        std::sort(sorted.begin(), sorted.end(), [](const QAPair& a, const QAPair& b) {
            return std::tie(a.source_ids, a.question) < std::tie(b.source_ids, b.question);
        });
        Rng rng = keyed_rng(seed, "subsample/" + pool_key);
        rng.shuffle(sorted);
        sorted.resize(take);
        out.insert(out.end(), sorted.begin(), sorted.end());
    }
    std::sort(out.begin(), out.end(), [](const QAPair& a, const QAPair& b) {
        return std::tie(a.pool, a.source_ids, a.question) <
               std::tie(b.pool, b.source_ids, b.question);
    });
    return out;
}

nlohmann::json SynthReport::to_json() const {
    nlohmann::json doc;
    doc["generated"] = generated;
    doc["kept"] = kept;
    doc["client_failures"] = client_failures;
    doc["validation_failures"] = validation_failures;
    doc["warnings"] = warnings;
    return doc;
}

namespace {

// model reply -> validated QA pairs (array or single object)
std::vector<QAPair> parse_qa_reply(const std::string& raw, int limit, SynthReport& report) {
    nlohmann::json doc = nlohmann::json::parse(raw, nullptr, false);
    if (doc.is_discarded()) {
        auto inner = model::strip_code_fences(raw);
        if (inner.ok()) doc = nlohmann::json::parse(inner.value(), nullptr, false);
    }
    std::vector<QAPair> out;
    if (doc.is_discarded()) {
        report.validation_failures++;
        return out;
    }
    nlohmann::json arr = doc.is_array() ? doc : nlohmann::json::array({doc});
    for (const auto& entry : arr) {
        if (out.size() >= static_cast<size_t>(limit)) break;
        auto pair = QAPair::from_json(entry);
        if (!pair.ok()) {
            report.validation_failures++;
            continue;
        }
        out.push_back(std::move(pair).value());
    }
    return out;
}

} // namespace

Result<SynthResult> synthesize(const KnowledgeGraph& g, model::ModelClient& client,
                               const SynthConfig& config) {
    if (!g.certified()) {
        return Error{Errc::not_validated, "QA synthesis requires a certified graph"};
    }
    std::set<std::string> paths(config.paths.begin(), config.paths.end());
    SynthReport report;
    std::map<std::string, std::vector<QAPair>> pools;

    auto prompted = [&](const std::string& prompt, SourceKind source, const std::string& pool,
                        std::vector<std::string> source_ids, const std::string& subject) {
        model::ChatRequest req;
        req.messages = {{"user", prompt}};
        uint64_t hash = model::prompt_hash(req);
        auto reply = client.send(req);
        if (!reply.ok()) {
            report.client_failures++;
            return;
        }
        for (QAPair& pair : parse_qa_reply(reply.value(), config.pairs_per_prompt, report)) {
            pair.source = source;
            pair.pool = pool;
            pair.source_ids = source_ids;
            pair.subject = subject;
            pair.prompt_hash = hex64(hash);
            pair.client_id = client.id();
            if (auto st = validate_qa(pair); !st.ok()) {
                report.validation_failures++;
                continue;
            }
            report.generated[pool]++;
            pools[pool].push_back(std::move(pair));
        }
    };

    if (paths.count("node")) {
        for (NodeKind kind :
             {NodeKind::Concept, NodeKind::Skill, NodeKind::Experiment, NodeKind::Exercise}) {
            for (const auto& id : g.node_ids_of_kind(kind)) {
                auto prompt = render_node_prompt(g, id, config.pairs_per_prompt);
                if (!prompt.ok()) continue;
                prompted(prompt.value(), SourceKind::node_grounded,
                         kind == NodeKind::Exercise ? kPoolExercise : kPoolNode, {id},
                         g.node_subject(id).value_or(""));
            }
        }
    }
    if (paths.count("edge")) {
        std::vector<Edge> edges = g.edges();
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.kind, a.source, a.target) < std::tie(b.kind, b.source, b.target);
        });
        for (const Edge& e : edges) {
            auto prompt = render_edge_prompt(g, e, config.pairs_per_prompt);
            if (!prompt.ok()) continue;
            prompted(prompt.value(), SourceKind::edge_grounded, kPoolEdge,
                     {e.source, graph::edge_kind_name(e.kind), e.target},
                     g.node_subject(e.source).value_or(""));
        }
    }
    if (paths.count("exercise")) {
        std::vector<Edge> edges = g.edges();
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.kind, a.source, a.target) < std::tie(b.kind, b.source, b.target);
        });
        for (const Edge& e : edges) {
            if (e.kind != EdgeKind::tests_concept && e.kind != EdgeKind::tests_skill) continue;
            auto pair = exercise_template_qa(g, e);
            if (!pair.ok()) {
                report.validation_failures++;
                continue;
            }
            if (auto st = validate_qa(pair.value()); !st.ok()) {
                report.validation_failures++;
                continue;
            }
            report.generated[kPoolAssessment]++;
            pools[kPoolAssessment].push_back(std::move(pair).value());
        }
    }

    for (const auto& [pool_key, target] : config.targets) {
        auto it = pools.find(pool_key);
        size_t have = it == pools.end() ? 0 : it->second.size();
        if (target > have) {
            report.warnings.push_back("target " + std::to_string(target) + " for pool '" +
                                      pool_key + "' exceeds generated " + std::to_string(have) +
                                      "; taking all");
        }
    }

    SynthResult result;
    result.pairs = balanced_subsample(pools, config.targets, config.seed);
    for (const auto& p : result.pairs) report.kept[p.pool]++;
    result.report = std::move(report);
    return result;
}

} // namespace kgforge::synth
