#include "dlrc/csv.hpp"

#include "dlrc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>

namespace dlrc {

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{}", value);
}

CsvWriter::CsvWriter(const std::string& path, std::string_view provenance, std::string_view header)
  : path_{path}, out_{path, std::ios::out | std::ios::trunc | std::ios::binary}
{
    if (!out_) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
    if (!provenance.empty()) out_ << "# " << provenance << '\n';
    out_ << header << '\n';
}

void CsvWriter::row(std::initializer_list<std::string_view> fields)
{
    bool first = true;
    for (auto f : fields) {
        if (!first) out_ << ',';
        out_ << f;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << fields[i];
    }
    out_ << '\n';
}

void CsvWriter::close()
{
    out_.close();
    if (out_.fail()) throw Error(ErrorCode::io, "failed writing '" + path_ + "'");
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            break;
        }
        fields.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view text)
{
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return text;
}

bool parse_double(std::string_view text, double& out)
{
    text = trim(text);
    if (text.empty()) return false;
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "inf" || lowered == "+inf" || lowered == "infinity") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    if (lowered == "-inf" || lowered == "-infinity") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(lowered.c_str(), &end);
    if (end != lowered.c_str() + lowered.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

}  // namespace dlrc
