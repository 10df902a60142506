#include "kgforge/ingest/prompts.hpp"

#include "kgforge/core/text.hpp"

namespace kgforge::ingest {

namespace {

// Kept brace-free outside the placeholder so an unsubstituted placeholder is
// detectable in the rendered prompt.
const char* kExtractionTemplate =
    "You are a knowledge graph expert proficient in K-12 textbook research and development, "
    "skilled at extracting structured knowledge from textbook texts.\n"
    "Your task is to: read the provided textbook section text, extract nodes and edges "
    "according to the specified Schema Definition, and output the JSON result.\n"
    "\n"
    "Schema Definition:\n"
    "- Node types: Concept, Skill, Experiment, Exercise.\n"
    "- Concept requires name, definition (preferring textbook wording), and importance, one of: "
    "understand, master, important. Optional: examples, aliases, formula, unit.\n"
    "- Skill requires name and description. Optional: examples.\n"
    "- Experiment requires name, instruments, and is_student (0 or 1). Optional: process, "
    "phenomena, conclusion.\n"
    "- Exercise requires stem, answer, type, and an integer difficulty from 1 to 5. Optional: "
    "analysis.\n"
    "- Edge types and allowed connections: is_a (Concept to Concept), prerequisites_for "
    "(Concept or Skill to Concept, Skill, or Experiment), relates_to (Concept to Concept), "
    "verifies (Experiment to Concept), tests_concept (Exercise to Concept), tests_skill "
    "(Exercise to Skill), appears_in (content node to the section reference \"@section\").\n"
    "- Every node carries a unique local_id; edges reference local_ids or \"@section\".\n"
    "\n"
    "Requirements:\n"
    "- This task primarily focuses on building concepts/skills and the relationships between "
    "them. Exercises are optional or only a few are required; quality over quantity is "
    "preferable.\n"
    "- Extract the truly important and clearly presented concepts/methods from this section of "
    "the textbook. Do not create content or include trivial details.\n"
    "- Skills should be generalizable and applicable within the subject, not specific "
    "problem-solving techniques used in a particular question.\n"
    "- For each edge, if there are supporting sentences in the original textbook text, please "
    "provide the original text in an evidence field.\n"
    "\n"
    "Output Format:\n"
    "- Output only a single JSON object with keys schema_version, nodes, and edges. Do not "
    "output any explanatory text, comments, or Markdown code block markers.\n"
    "\n"
    "Input Text:\n"
    "- Textbook text: {Section_Markdown_Content}\n"
    "\n"
    "Now, please generate the knowledge graph JSON:\n";

} // namespace

Result<std::string> render_extraction_prompt(const std::string& section_markdown) {
    if (text::trim(section_markdown).empty()) {
        return Error{Errc::empty_section, "section text is empty"};
    }
    std::string prompt = kExtractionTemplate;
    size_t pos = prompt.find(kSectionPlaceholder);
    if (pos == std::string::npos) {
        return Error{Errc::config_error, "extraction template lost its placeholder"};
    }
    prompt.replace(pos, std::string(kSectionPlaceholder).size(), section_markdown);
    if (prompt.find(kSectionPlaceholder) != std::string::npos) {
        return Error{Errc::config_error, "placeholder left unsubstituted"};
    }
    return prompt;
}

} // namespace kgforge::ingest
