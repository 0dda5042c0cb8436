#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace dlrc {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Line-oriented CSV output. An optional provenance string is written first
/// as a `# ...` comment so every artifact can be traced to its invocation.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::string_view provenance, std::string_view header);

    void row(std::initializer_list<std::string_view> fields);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::string path_;
    std::ofstream out_;
};

/// Splits one CSV line on commas (no quoting support; artifacts never quote).
std::vector<std::string> split_csv_line(std::string_view line);

/// Trims ASCII whitespace on both ends.
std::string_view trim(std::string_view text);

/// Strict full-string numeric parse; accepts `inf`/`infinity`.
bool parse_double(std::string_view text, double& out);

/// FNV-1a, stable across platforms; used for config hashes.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace dlrc
