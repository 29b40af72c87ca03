#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace spdc {

// Result-file plumbing.  All output is deterministic: shortest-round-trip
// float formatting with '.' decimal separator, LF line endings, sorted JSON
// keys, and atomic writes (temp file + rename).

inline constexpr int kSchemaVersion = 1;

// Shortest decimal string that round-trips the double (std::to_chars).
std::string format_double(double value);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    // Mixed rows (e.g. mode labels + rates).
    void add_row(const std::vector<std::string>& cells);

    const std::string& str() const { return body_; }

private:
    std::string body_;
    std::size_t columns_ = 0;
};

void write_text_atomic(const std::filesystem::path& path, std::string_view content);
void write_csv_atomic(const std::filesystem::path& path, const CsvWriter& csv);
// Serializes with 2-space indentation and a schema_version field injected at
// the top level (objects only).
void write_json_atomic(const std::filesystem::path& path, nlohmann::json j);

}  // namespace spdc
