#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgforge/core/error.hpp"

namespace kgforge::jsonl {

// One JSON document per line, keys sorted (nlohmann object order).
Status write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& records);

Result<std::vector<nlohmann::json>> read_file(const std::filesystem::path& path);

Status for_each_line(const std::filesystem::path& path,
                     const std::function<Status(size_t line_no, const nlohmann::json&)>& fn);

Result<std::string> read_text_file(const std::filesystem::path& path);
Status write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace kgforge::jsonl
