#pragma once

// Run configuration: sectioned key-value text (or JSON with the same
// sections) resolved into typed settings for every command.

#include "dlrc/readout.hpp"
#include "dlrc/sweep.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dlrc {

/// Raw `section.key -> (value, line)` table. Lists are comma separated;
/// JSON arrays are joined the same way.
class KeyValueFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static KeyValueFile parse_ini(const std::string& text);
    static KeyValueFile parse_json(const std::string& text);
    /// JSON when the first non-blank character is `{`, INI otherwise.
    static KeyValueFile parse(const std::string& text);

    const Entry* find(const std::string& key) const;
    bool has_section(const std::string& section) const;
    int line_of(const std::string& key) const;
    const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    std::map<std::string, Entry> entries_;
};

struct OutputSpec {
    std::string dir = "out";
    bool csv = true;
    bool json = true;
};

struct SweepSection {
    MaskFamily family = MaskFamily::two_sine;
    std::vector<int> k_values;
    std::vector<int> f1_values;
    std::vector<int> f2_values;
    std::vector<double> alpha_values;
    std::vector<double> beta_values;
    std::vector<double> phase_values;
    int replicas = 3;
    MetricSelection select_on = MetricSelection::test;
    std::vector<double> snr_db;
};

struct RunConfig {
    TaskSpec task;
    MaskSpec mask;
    /// Explicit coefficients from `mask.values`; overrides the family.
    std::optional<std::vector<double>> mask_values;
    ReservoirConfig reservoir;
    ReadoutOptions readout;
    MetricKind metric = MetricKind::nmse;
    CapacityLags capacity_lags;
    CapacitySplit capacity_split;
    std::optional<SweepSection> sweep;
    OutputSpec output;
    /// Line numbers of the keys that were present, for error anchoring.
    std::map<std::string, int> lines;

    std::uint64_t seed() const { return task.seed; }
    void set_seed(std::uint64_t seed) { task.seed = seed; }

    Mask build_mask() const;
    /// Requires a sweep section.
    SweepGrid build_sweep() const;
    /// Normalized, fully resolved text form; identical for equivalent files.
    std::string canonical() const;
    /// FNV-1a of canonical(), 16 hex digits.
    std::string hash() const;
};

/// Resolves and validates. Every failure is a ConfigError carrying the key
/// and, for text files, the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Comma-separated items; each item a value or an inclusive range `a:b`
/// (integers) / `a:b:step` (reals). `log:a:b:n` gives n log-spaced reals.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace dlrc
