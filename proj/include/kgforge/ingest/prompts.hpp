#pragma once

#include <string>

#include "kgforge/core/error.hpp"

namespace kgforge::ingest {

inline constexpr const char* kExtractionPromptVersion = "1";

// Single user message; no system message. EmptySection when the text is blank.
Result<std::string> render_extraction_prompt(const std::string& section_markdown);

// The one placeholder the template carries; rendering must consume it.
inline constexpr const char* kSectionPlaceholder = "{Section_Markdown_Content}";

} // namespace kgforge::ingest
