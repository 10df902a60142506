#include "kgforge/graph/schema.hpp"

namespace kgforge::graph {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Book: return "Book";
        case NodeKind::Chapter: return "Chapter";
        case NodeKind::Section: return "Section";
        case NodeKind::Concept: return "Concept";
        case NodeKind::Skill: return "Skill";
        case NodeKind::Experiment: return "Experiment";
        case NodeKind::Exercise: return "Exercise";
    }
    return "?";
}

const char* edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::is_a: return "is_a";
        case EdgeKind::prerequisites_for: return "prerequisites_for";
        case EdgeKind::relates_to: return "relates_to";
        case EdgeKind::verifies: return "verifies";
        case EdgeKind::tests_concept: return "tests_concept";
        case EdgeKind::tests_skill: return "tests_skill";
        case EdgeKind::appears_in: return "appears_in";
        case EdgeKind::leads_to: return "leads_to";
        case EdgeKind::is_part_of: return "is_part_of";
    }
    return "?";
}

std::optional<NodeKind> node_kind_from(std::string_view name) {
    for (NodeKind k : all_node_kinds()) {
        if (name == node_kind_name(k)) return k;
    }
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from(std::string_view name) {
    for (EdgeKind k : all_edge_kinds()) {
        if (name == edge_kind_name(k)) return k;
    }
    return std::nullopt;
}

bool edge_kinds_allowed(EdgeKind edge, NodeKind source, NodeKind target) {
    using N = NodeKind;
    switch (edge) {
        case EdgeKind::is_a:
            return source == N::Concept && target == N::Concept;
        case EdgeKind::prerequisites_for:
            return (source == N::Concept || source == N::Skill) &&
                   (target == N::Concept || target == N::Skill || target == N::Experiment);
        case EdgeKind::relates_to:
            return source == N::Concept && target == N::Concept;
        case EdgeKind::verifies:
            return source == N::Experiment && target == N::Concept;
        case EdgeKind::tests_concept:
            return source == N::Exercise && target == N::Concept;
        case EdgeKind::tests_skill:
            return source == N::Exercise && target == N::Skill;
        case EdgeKind::appears_in:
            return is_content_kind(source) && target == N::Section;
        case EdgeKind::leads_to:
            return source == N::Chapter && target == N::Chapter;
        case EdgeKind::is_part_of:
            return (source == N::Section && target == N::Chapter) ||
                   (source == N::Chapter && target == N::Book);
    }
    return false;
}

namespace {

Status violation(const std::string& what) {
    return make_error(Errc::schema_violation, what);
}

Status require_string(const nlohmann::json& props, const char* key) {
    auto it = props.find(key);
    if (it == props.end() || !it->is_string() || it->get<std::string>().empty()) {
        return violation(std::string("required field '") + key + "' missing or empty");
    }
    return Status::success();
}

Status require_positive_int(const nlohmann::json& props, const char* key) {
    auto it = props.find(key);
    if (it == props.end() || !it->is_number_integer() || it->get<int64_t>() <= 0) {
        return violation(std::string("field '") + key + "' must be a positive integer");
    }
    return Status::success();
}

} // namespace

Status validate_props(NodeKind kind, const nlohmann::json& props) {
    if (!props.is_object()) return violation("props must be a JSON object");
    switch (kind) {
        case NodeKind::Concept: {
            if (auto st = require_string(props, "definition"); !st.ok()) return st;
            auto it = props.find("importance");
            if (it == props.end() || !it->is_string()) {
                return violation("concept 'importance' missing");
            }
            const std::string v = it->get<std::string>();
            if (v != "understand" && v != "master" && v != "important") {
                return violation("concept importance '" + v + "' not in {understand, master, important}");
            }
            return Status::success();
        }
        case NodeKind::Skill: {
            if (auto st = require_string(props, "description"); !st.ok()) return st;
            auto it = props.find("generalizable");
            if (it != props.end()) {
                if (!it->is_boolean() || !it->get<bool>()) {
                    return violation("skill must be generalizable");
                }
            }
            return Status::success();
        }
        case NodeKind::Experiment: {
            auto it = props.find("instruments");
            bool ok = false;
            if (it != props.end()) {
                if (it->is_string()) ok = !it->get<std::string>().empty();
                if (it->is_array()) ok = !it->empty();
            }
            if (!ok) return violation("experiment 'instruments' missing or empty");
            auto is = props.find("is_student");
            bool student_ok = false;
            if (is != props.end()) {
                if (is->is_boolean()) student_ok = true;
                if (is->is_number_integer()) {
                    int64_t v = is->get<int64_t>();
                    student_ok = v == 0 || v == 1;
                }
            }
            if (!student_ok) return violation("experiment 'is_student' must be 0 or 1");
            return Status::success();
        }
        case NodeKind::Exercise: {
            for (const char* key : {"stem", "answer", "type"}) {
                if (auto st = require_string(props, key); !st.ok()) return st;
            }
            auto it = props.find("difficulty");
            if (it == props.end() || !it->is_number_integer()) {
                return violation("exercise 'difficulty' must be an integer");
            }
            int64_t d = it->get<int64_t>();
            if (d < 1 || d > 5) {
                return violation("exercise difficulty " + std::to_string(d) + " outside [1,5]");
            }
            return Status::success();
        }
        case NodeKind::Book: {
            if (auto st = require_string(props, "subject"); !st.ok()) return st;
            return require_positive_int(props, "order");
        }
        case NodeKind::Chapter:
        case NodeKind::Section:
            return require_positive_int(props, "order");
    }
    return Status::success();
}

} // namespace kgforge::graph
