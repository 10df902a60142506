#pragma once

#include <string>
#include <vector>

#include "kgforge/graph/graph.hpp"

namespace kgforge::bench {

inline constexpr const char* kQuestionTemplatesVersion = "1";

enum class Family { ground, prereq, neighbor, evidence, locate };

const char* family_name(Family f);

struct TaskSpec {
    std::string subtask; // "ground_1", ..., "locate_2"
    Family family = Family::ground;
    int index = 1; // subtask index within the family
    std::vector<graph::NodeKind> query_kinds;
    std::string question_template; // carries a {name} or {stem} placeholder
};

// The nine concrete subtasks, in canonical generation order.
const std::vector<TaskSpec>& task_specs();

const TaskSpec* find_task_spec(const std::string& subtask);

// Question text for a query node under the given spec.
std::string render_question(const TaskSpec& spec, const graph::KnowledgeGraph& g,
                            const std::string& query_id);

// Option/display text: Exercise nodes use their stem, Chapters are qualified
// by their book title, everything else uses its name.
std::string display_text(const graph::KnowledgeGraph& g, const std::string& node_id);

} // namespace kgforge::bench
