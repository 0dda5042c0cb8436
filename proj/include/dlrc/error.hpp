#pragma once

#include <stdexcept>
#include <string>

namespace dlrc {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
    invalid_argument = 1,
    config = 2,
    dimension_mismatch = 3,
    non_finite = 4,
    singular = 5,
    io = 6,
    parse = 7,
    runtime = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_{code} {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when a configuration value violates a type invariant. Carries the
/// offending key and, when known, the source line of the config file.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message, int line = 0)
      : Error(ErrorCode::config, format(key, message, line)), key_{std::move(key)}, line_{line}
    {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, const std::string& message, int line)
    {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += key + ": ";
        return out + message;
    }

    std::string key_;
    int line_;
};

}  // namespace dlrc
