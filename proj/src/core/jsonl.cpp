#include "kgforge/core/jsonl.hpp"

#include <sstream>

namespace kgforge::jsonl {

Status write_file(const std::filesystem::path& path, const std::vector<nlohmann::json>& records) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) return make_error(Errc::io_error, "cannot open " + path.string() + " for writing");
    for (const auto& rec : records) {
        out << rec.dump() << '\n';
    }
    out.flush();
    if (!out) return make_error(Errc::io_error, "write failed: " + path.string());
    return Status::success();
}

Result<std::vector<nlohmann::json>> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return make_error(Errc::io_error, "cannot open " + path.string());
    std::vector<nlohmann::json> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            return make_error(Errc::malformed_document,
                              path.string() + ":" + std::to_string(line_no) + " is not valid JSON");
        }
        records.push_back(std::move(j));
    }
    return records;
}

Status for_each_line(const std::filesystem::path& path,
                     const std::function<Status(size_t, const nlohmann::json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return make_error(Errc::io_error, "cannot open " + path.string());
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            return make_error(Errc::malformed_document,
                              path.string() + ":" + std::to_string(line_no) + " is not valid JSON");
        }
        if (auto st = fn(line_no, j); !st.ok()) return st;
    }
    return Status::success();
}

Result<std::string> read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return make_error(Errc::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Status write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) return make_error(Errc::io_error, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) return make_error(Errc::io_error, "write failed: " + path.string());
    return Status::success();
}

} // namespace kgforge::jsonl
