#pragma once

// Command implementations behind the CLI: load a config, run, write artifacts.
// Each returns a process exit code: 0 success, 1 config error, 2 runtime error.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace dlrc {

enum class LogLevel { info, warning, error };

struct CommandOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::optional<std::string> out_dir;
    // sweep
    bool resume = false;
    std::optional<std::string> landscape;  // "axis1,axis2"
    bool snr_curve = false;
    std::size_t stop_after = 0;  // simulate an interruption after this many points
    // gen-mask without a config
    std::optional<std::string> mask_family;
    std::optional<int> n_nodes;
    std::optional<int> f1;
    std::optional<int> f2;
    std::optional<std::uint64_t> mask_seed;

    std::function<void(LogLevel, const std::string&)> log;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_runtime = 2;

/// metrics.json, predictions.csv, weights.csv.
int cmd_run(const CommandOptions& options);
/// sweep.csv (+ landscape.csv, snr_curve.csv, best.json).
int cmd_sweep(const CommandOptions& options);
/// capacity.csv, totals.json.
int cmd_capacity(const CommandOptions& options);
/// mask.csv, from the config's mask section or the explicit overrides.
int cmd_gen_mask(const CommandOptions& options);
/// dataset.csv for the config's task.
int cmd_dataset(const CommandOptions& options);

}  // namespace dlrc
