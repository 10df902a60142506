#include "kgforge/bench/taskspec.hpp"

namespace kgforge::bench {

using graph::NodeKind;

const char* family_name(Family f) {
    switch (f) {
        case Family::ground: return "ground";
        case Family::prereq: return "prereq";
        case Family::neighbor: return "neighbor";
        case Family::evidence: return "evidence";
        case Family::locate: return "locate";
    }
    return "?";
}

const std::vector<TaskSpec>& task_specs() {
    static const std::vector<TaskSpec> specs = {
        {"ground_1", Family::ground, 1, {NodeKind::Exercise},
         "Which of the following concepts or skills does this exercise assess? Exercise: {stem}"},
        {"ground_2", Family::ground, 2, {NodeKind::Concept, NodeKind::Skill},
         "Which of the following exercises assess \"{name}\"?"},
        {"prereq_1", Family::prereq, 1, {NodeKind::Concept, NodeKind::Skill},
         "Which of the following must be learned as prerequisites for \"{name}\"?"},
        {"prereq_2", Family::prereq, 2, {NodeKind::Concept, NodeKind::Skill},
         "Which of the following are the most direct successors of \"{name}\" in the learning "
         "order?"},
        {"neighbor", Family::neighbor, 1, {NodeKind::Concept},
         "Which of the following concepts are directly related to \"{name}\"?"},
        {"evidence_1", Family::evidence, 1, {NodeKind::Concept},
         "Which of the following experiments verify the concept \"{name}\"?"},
        {"evidence_2", Family::evidence, 2, {NodeKind::Experiment},
         "Which of the following concepts does the experiment \"{name}\" verify?"},
        {"locate_1", Family::locate, 1,
         {NodeKind::Concept, NodeKind::Skill, NodeKind::Experiment, NodeKind::Exercise},
         "In which of the following chapters does \"{name}\" first appear?"},
        {"locate_2", Family::locate, 2, {NodeKind::Chapter},
         "Which of the following chapters are prerequisites for the chapter \"{name}\"?"},
    };
    return specs;
}

const TaskSpec* find_task_spec(const std::string& subtask) {
    for (const auto& s : task_specs()) {
        if (s.subtask == subtask) return &s;
    }
    return nullptr;
}

std::string display_text(const graph::KnowledgeGraph& g, const std::string& node_id) {
    const graph::Node* n = g.find_node(node_id);
    if (!n) return {};
    if (n->kind == NodeKind::Exercise) {
        std::string stem = n->props.value("stem", std::string{});
        if (!stem.empty()) return stem;
    }
    if (n->kind == NodeKind::Chapter) {
        if (auto book = g.chapter_book(node_id)) {
            const graph::Node* b = g.find_node(*book);
            if (b) return b->name + " · " + n->name;
        }
    }
    return n->name;
}

std::string render_question(const TaskSpec& spec, const graph::KnowledgeGraph& g,
                            const std::string& query_id) {
    const graph::Node* n = g.find_node(query_id);
    std::string question = spec.question_template;
    auto substitute = [&](const std::string& placeholder, const std::string& value) {
        size_t pos = question.find(placeholder);
        if (pos != std::string::npos) question.replace(pos, placeholder.size(), value);
    };
    if (!n) return question;
    if (n->kind == NodeKind::Exercise) {
        substitute("{stem}", n->props.value("stem", n->name));
        substitute("{name}", n->name);
    } else {
        substitute("{name}", n->name);
        substitute("{stem}", n->name);
    }
    return question;
}

} // namespace kgforge::bench
